#pragma once

// PyWavelets 1.8 wavedec2(x, "db<order>", mode="periodization", level=2) flattened with
// coeffs_to_array, for the 8 x 8 input x[i] = sin(0.37 i) + 0.01 i (row-major).

namespace reference {

inline constexpr double kDaubechiesLevel2[8][64] = {
    {0.8539392371943306, 0.6376781590059546, -0.00464133334211575, 0.08446992197006248,
     -0.006862250263912961, 0.014709933607710862, 0.023357268379093132, 0.014556654198418985,
     2.115244484738626, 2.146545936553747, -0.09443806029561164, 0.06910676909189051,
     -0.018864739761134786, 0.005137415893981867, 0.021221751157373236, 0.020975147262416366,
     -0.336738881924244, -0.37892437481129115, 0.022358014388320857, -0.0044384149942652,
     -0.029710734884416057, -0.006409929822498883, 0.015013042783848851, 0.02335262113056158,
     -0.2942288850343326, -0.3716514195129471, 0.021026618070593472, 0.011861010044692671,
     -0.03798526659034862, -0.018425636266337087, 0.00554113165038761, 0.021378910448112243,
     0.10415691380681616, 1.3702447601962522, 1.8777634019277099, 1.36124867531393,
     -0.3647531817010491, -0.24612070765961336, 0.001248373183247109, 0.24796447635039165,
     -0.6002783056073414, 0.8084264292926941, 1.7524282751614413, 1.737954905374934,
     -0.35320346030167804, -0.32648155746641233, -0.12898927008634697, 0.13597251672191968,
     -1.2368379923457944, 0.13070394385972087, 1.388034467827251, 1.877490651383774,
     -0.29557479854961743, -0.36424960764463843, -0.24239896700068886, 0.0062415760475577065,
     -1.7224765391795147, -0.5745069881838692, 0.8321208134878098, 1.7616520732310756,
     -0.19938543441799317, -0.3544976365586001, -0.32418528306695854, -0.12430364093699797},
    {1.5401552541679502, 1.906739982989638, 0.2189995984236675, -0.2812975159052541,
     0.12276659748768971, 0.04781525220091963, 0.019300357840713586, -0.45879601146926985,
     1.1961708594236573, 1.110341720911412, -0.1374141174472674, 0.2173083094410953,
     -0.018750293530624594, 0.0009710546452148215, 0.0016129366179011978, 0.065182518710741,
     -0.4619177474308893, -0.5512064722294454, -0.07360743706265405, 0.1037267431216159,
     -0.020260036964373146, 0.0004357310802066555, 0.001391790635595462, 0.07084379241359194,
     0.42036214721588555, 0.03754666300829146, -0.2610024167714164, 0.3557663336232877,
     -0.050401566047069316, -0.013586570504203699, -0.006065172999115978, 0.1905543009588263,
     -0.37044493805104867, -1.070683006682919, -2.0681880336345957, -2.1303736829649584,
     0.19439579798244028, -0.09437766253749391, -0.12048843502393683, -0.4015754210331822,
     0.1504682476981133, -0.002313891571769894, -1.3478822686827938, -2.223559352304721,
     0.35613352185371216, -0.047484236053453956, -0.1063343416025385, -0.9871039929113404,
     0.4334493397768351, 0.7070784990066135, -0.7367616376137129, -2.113962142713506,
     0.4340388939025801, -0.00683838407857304, -0.08304432211092394, -1.3053407360547533,
     0.7335073966102752, 0.8615812689901883, -0.32681849304988614, -1.3632227903590017,
     0.3457284436325282, -0.015422333112940598, -0.07524713555748733, -1.0197562603821158},
    {1.92318085206645, 1.983321155395567, 0.05597380859110773, -0.09165507497858319,
     -0.030529389750084814, -0.00756449325735941, -0.01611549219179257, 0.2813329476251486,
     0.9016989213876081, 0.9452068886430306, 0.0669200373224478, -0.10426289395521021,
     0.01412671253615529, 6.234992478294397e-05, 8.969818846527033e-05, -0.056192591393866204,
     -0.015214915997449226, -0.07221675905826087, -0.01691149990668688, 0.04051912321126723,
     0.013841053551947398, 3.528302151551907e-05, 8.17980316984452e-05, -0.0552483383670439,
     0.7107192963565621, 1.33394544461542, 0.2306749426407075, -0.5134315178940926,
     0.020247469263049565, 0.001466873590092812, 0.003894277815382114, -0.1225428396648347,
     1.2308558536818814, 0.025767602616442897, 1.4137092402295088, 2.216323448141832,
     0.3088359033189933, 0.027828717467485227, 0.0022178618078840424, -0.9406470773550246,
     1.2145916085957325, -0.8697980435218745, 0.5717663100242673, 1.8492229027797205,
     0.3608847176284281, 0.03584013996685431, 0.01723478758632188, -1.284941234128357,
     1.1428606321037318, -1.4527106379130301, -0.14624528538418216, 1.3880537165661435,
     0.3611001955164055, 0.038366249312775255, 0.02828770651917549, -1.4257966228998842,
     0.49684742405774146, -0.3740677852904629, 0.7816342037817836, 1.3793142950776502,
     0.2507748646533434, 0.02206833578677444, -0.0005295266308715241, -0.7342416216377824},
    {0.9300332225966748, 1.0116598181565344, 0.023879161008404155, -0.10011680126396802,
     -0.009722332551977676, -0.0018915237063431688, -0.027912963512769576, 0.01946150523562641,
     2.1122748633710544, 1.6994399133683937, -0.027283660903861882, 0.15165217421777677,
     -0.011516517782447253, 5.551179184148502e-05, -0.08750089944920247, -0.010737012289791032,
     0.19080165092202273, 0.2176575604429733, -0.0021967584165207494, -0.002019088206622738,
     -0.0008745703684406043, -0.0011821289197357196, 0.03035456614885031, 0.01680506491280826,
     -0.7325647036951415, -0.8814442387106923, -0.0475585671411536, 0.1511265658525968,
     -0.0005071774001789214, -0.0008754232131397213, 0.02643953128213796, 0.012619050899505296,
     -2.2485477940065333, 0.5292839521946198, -0.34162781474910026, -1.492377207567971,
     0.043734772548597714, 0.033553704138232866, -0.39849262500140836, -0.4548400554839834,
     -2.2915623592284042, 0.9047757278070137, 0.25979089526587196, -1.0030315821431353,
     0.026877407873842556, 0.033035914985482945, -0.5285583842224357, -0.4620361106755862,
     -1.8176160183705758, 1.1989192294045523, 0.7460305917526469, -0.4190111884831262,
     0.01513615329335104, 0.028746149552957144, -0.5293781876523279, -0.4092879929214809,
     -1.5665827638485759, -0.13037041281815315, -1.2437128226099023, -1.952485918146115,
     0.06614237038006436, 0.0276948578216881, -0.07601598551751884, -0.34902859220695404},
    {1.2161102467229112, 1.0661224408054275, -0.22613093498640283, 0.22596176254636988,
     -0.02564225969008316, 0.004219703193755451, -0.17853272777847418, 0.06551061796698228,
     1.6549380224386687, 1.8162371075256494, 0.07605356350880782, -0.044333757490100406,
     0.04302026340084802, -0.004682533942782025, 0.31892036890525977, -0.1277188020372114,
     0.24117254005041047, 0.3454254451049984, 0.10446141224665649, -0.09420791980194015,
     -0.009056807146726084, 0.0019421040897475129, -0.06089804572749627, 0.02040962638980352,
     -0.9420864452729613, -0.563695261348682, 0.39570224432465156, -0.3606540717368519,
     -0.00032125684402714593, 0.0009026223725866801, 0.004237542338865752, -0.005325096567792806,
     2.3132517577668223, 0.258364264313654, -0.6330265336212634, 0.6475070805477271,
     -0.187766557452247, 0.03896817423872432, -1.0701668318584543, 0.34758142845243417,
     2.1448939979141923, 0.19583147906103085, -1.0791894844209418, 0.1276353550150906,
     -0.20560324961041532, 0.03984015967341116, -1.2279774626338877, 0.4155905683111961,
     1.5153418059147281, -0.10870516922977852, -0.6717567827852906, 0.34284829396091215,
     -0.13934045795244246, 0.029849881275395024, -0.7756741199214002, 0.24641572735375766,
     2.4569605534335883, 0.6624521802302903, 0.7806195519674827, 1.9150971354786432,
     -0.10655751284753519, 0.02802123535075061, -0.4901102594845782, 0.12421267401781348},
    {1.843706182843929, 2.3359417862176204, -0.06386211460589859, -0.0888923280520136,
     0.013255722827672803, 0.048435547316226825, 0.12850524118223566, -0.056666628124302655,
     0.8695910878787338, 0.7041687605523728, -0.012782160122371036, 0.09036107799437149,
     -0.010275448620743647, -0.06650598204190807, -0.149809477652064, 0.0623922760107814,
     -0.024166673737107312, 0.6427155122413379, -0.05909046913068506, -0.17224920733903895,
     -0.0008454976604596131, -0.013435809912951902, -0.027257571770129614, 0.010818824134958249,
     0.664519172526672, 0.7096550693897132, -0.01756845020384079, 0.006048808475856013,
     0.004446850626498268, 0.0016118125604065122, 0.018350584740209407, -0.0100057625396865,
     -1.4931656428630606, -1.673247121535089, 1.0224668802292043, -0.03815349140029384,
     -0.15370628016578902, -0.23719127791999797, -1.0103880062628507, 0.49470162130313555,
     -0.9751628772482812, -1.5037046046139981, 1.3724685553363294, 0.5179549299018199,
     -0.14839140395356995, -0.26825676034282, -1.0371920826592997, 0.49923158946079754,
     -1.6486063229923986, -0.9197462121558515, 0.15567291411606532, -0.9270112044209575,
     -0.0984602753424696, -0.058476204092008814, -0.5002734309330075, 0.26539614351286805,
     -2.1605550630556367, -1.7753989568352093, 0.1879117379420108, -1.0098490059515395,
     -0.1358950700760674, -0.1494392227910948, -0.7985459826013888, 0.4041700397760857},
    {1.5908405817057694, 1.502915173862352, -0.13813509916261757, 0.044051913100064656,
     0.0019093958962137449, -0.03936156595705954, -0.002792956103622018, 0.00015490332940687706,
     1.3554357078942727, 1.304216354030261, 0.30690718240791726, -0.1814097512887409,
     -0.0007848860929837484, -0.019021635081693584, -0.013192582569505059, 0.007068289494749946,
     -0.8826148181952668, -0.8196979881880498, 0.03214949841775569, -0.0036033385708781757,
     -0.013667472563166382, 0.17315231966996117, -0.011056558800285787, 0.015305004777125517,
     0.45764058075662817, 0.49502366585605767, 0.3036437832140458, -0.15123115059280956,
     0.001935751573875308, -0.04773101393572975, -0.007155348708071775, 0.0022236739940419297,
     0.47653928582465344, 2.4251381764707842, -0.4744468824958607, -0.5700538318689429,
     0.03225536618834551, -0.8410347579570656, -0.20197130320509452, 0.07347500472414831,
     0.1732155780325398, 1.7811348868049943, -0.6829305721858515, -0.7277284598191683,
     0.026126779417586128, -0.7035252890617836, -0.17577435986247933, 0.06534264587022871,
     2.007071438801732, 2.005318905505522, 0.29839940909240764, 1.1145194665205826,
     -0.011739938632554061, -0.22737360433083295, -0.21796943727488807, 0.11275148234211978,
     0.9402370367656427, 2.547918872866172, -0.2900310441719291, -0.15617678059639273,
     0.02355917348119361, -0.7533634288145166, -0.22350586363517586, 0.0900309276632917},
    {0.8118178831684422, 0.786489339685102, 0.041014786810525374, -0.027024927583544054,
     -0.0030596336082451977, -0.026674642111051725, 0.016475424555179606, -0.007855485123575385,
     2.1997294962341543, 1.9553710984049577, 0.08267129488483582, -0.047395686823873635,
     0.008380640803948894, 0.19142811359885592, -0.09159536638966781, 0.047733510284112574,
     -0.8707840295063904, 0.09113422756724449, -0.11209650608871335, 0.04021295524319744,
     -0.016272615315310962, -0.2617830168495225, 0.1340431269310379, -0.0679762057279855,
     -0.36890127129040445, -0.22625472639441774, -0.022194094455034792, 0.009835946472565246,
     0.0007681345027923629, 0.036492620440920207, -0.01544952131717855, 0.00835959640243417,
     0.3095516064289067, -1.8202059687501453, -0.8138193741822901, 1.13789838666812,
     -0.004678250086415594, -1.1796436363226714, 0.5149893055340451, -0.2878406800859799,
     -0.46554396663205816, -1.569503034928247, -0.37496722593384024, 0.4228496597404676,
     0.019773604451881394, -0.6482582784056431, 0.25584447824338385, -0.15317058554938215,
     -1.5485308983146084, -2.6149549847748013, -1.0911598633037392, -0.43802343285834006,
     0.03130365889196192, -0.6464406563628312, 0.24104408253493126, -0.1501441691622841,
     -0.038963056032083034, -2.0709707741269265, -0.8327853329446911, 0.9410027743973913,
     0.004707497691563085, -1.1407007739661867, 0.48676692443033237, -0.2762691249241819},
};

} // namespace reference
