"""Integer coefficient lists (ascending powers of x) for the order-four operator L4."""

P4_COEFFS = (
    28000,
    -7854000,
    873083400,
    -54037012120,
    2099285510560,
    -52582954690298,
    766418384173454,
    -1305110830870633,
    -251264549473230968,
    7727889974481947660,
    -148605250583921845896,
    2252938824290334087840,
    -29645475671183771992224,
    354446803792968575565792,
    -3850023960384577768909952,
    36761552740911534545901568,
    -296338746597146803591135232,
    1953967934450852091348254720,
    -10332892566359614848157876224,
    43345424617004971574289235968,
    -142807225508285034141616963584,
    359505820412663945726355570688,
    -636026962079787427490890252288,
    616797192523902897669611192320,
    45081769872830521912080728064,
    -724445324775545659452335063040,
    521686412421099571093753036800,
)

P3_COEFFS = (
    -4480000,
    1569568000,
    -238072889600,
    21281848471520,
    -1268595101537120,
    53555230610961720,
    -1640958998875092768,
    36032181180727162732,
    -511428562675996247108,
    1919885419260765103140,
    129005457127386313373184,
    -4541113747259527374959592,
    96035689755227434986877112,
    -1580421468708164786235613784,
    22087897691588508601005658336,
    -274269909442085751262554453856,
    3087338965228238905750107987648,
    -31474922613166692487806647824256,
    286292076483602608978320943481344,
    -2277952733740370146287983798312960,
    15571420858521621122719931928608768,
    -90147310596750652057735905075527680,
    437037767842717994841190340774330368,
    -1755686044559298411692425577783885824,
    5764646607249819312839063743970148352,
    -15099644256008129321411266837095645184,
    29988658044590195137583404663925899264,
    -39745090934862435542362760545321353216,
    19398167217699147074111209484113149952,
    40447257076217292533523320942836580352,
    -84060042791775646091063152898350252032,
    40724840987587942318458896159738953728,
    34088801304111660197683822288919592960,
    -34873025538917765121024203000119296000,
)

P2_COEFFS = (
    202496000,
    -84671104000,
    15961404659200,
    -1817819283938560,
    141042261097575040,
    -7945786419559994432,
    336970482890735391136,
    -10948102706558839518064,
    272101251799491505044720,
    -4990110947182458236154960,
    57747165172968723279034760,
    4251375690841730042108460,
    -19664102412813111595220034000,
    586539601535060491103255831780,
    -11648280832868820874871506994648,
    185168754164459407231412940918408,
    -2524027149739792644483439537740736,
    30612264160202676427790224166656736,
    -336756368430758251349398256374549440,
    3374928905004383352843307682288939648,
    -30594829577694461795851875047251759104,
    247550135999641906395555078053550042624,
    -1761694860791556801623390940580862476288,
    10880585300165439414813579169355207311360,
    -57651463831886251900194559835893548711936,
    259270510361927197193957311877476593434624,
    -977978052427489585499761822245900827754496,
    3043305515555663644471442318841392857612288,
    -7593091629989468917294503828609326603304960,
    14317720902933442365662690637880059263713280,
    -17337418172194871339769688830180251691646976,
    3546879809404692840748046019057281136590848,
    32904223733304447370184725984806679848419328,
    -61070255095717193234874579385327453575577600,
    27287160011587832026533318214423160423448576,
    47538188516382446352727572349627507901726720,
    -56445574686008125172119780480189438504206336,
    -4318904703692797702055795738669690860339200,
    23615008551819589708322104774634383815475200,
)

P1_COEFFS = (
    -2508800000,
    1313872896000,
    -313495056179200,
    45402581315051520,
    -4502030899704432640,
    326696241278915100672,
    -18076764858722283537408,
    782686127310817603163904,
    -26913654199485748976447296,
    737895426074343351817982240,
    -15941906513987915790530627104,
    258773331815879690900773968400,
    -2607962306360230233373492782176,
    -5952736815704779243433578988240,
    986994067078072761785220512495568,
    -27146844884553280870530528088810192,
    517853080131584647940304813906843912,
    -8012481021063135055260920360860291792,
    106770798207835443855237151398845884336,
    -1266450623115899739824560105189293118336,
    13633188914202542686825030295715897195712,
    -134327854309114583892390549684219213327360,
    1210064015789594600623288132568732268617728,
    -9885950925613173310943030286291198265745664,
    72409258384998425181940033322470418064579584,
    -469743224562744760675515167582702668512534528,
    2668377435339727605940145954082991900173762560,
    -13130369247854115699188867418934857934469332992,
    55351059606988527054614355506855140926785847296,
    -197223974876465329508996857363261585516738379776,
    582489670248346892198679343375535443002292961280,
    -1378041300571967278991550115889940047326999478272,
    2424920581794299143009574014342980105306252509184,
    -2497995923785565959357957923036374193256014020608,
    -915221239768968177447587513000776938544384966656,
    8834509277491743877951520843172281230968074797056,
    -14739433233907061551935598195219565259254451404800,
    5672247850181350880926829983674652540556997033984,
    16865676565374917674763783610716646680263347142656,
    -23057876384647717319687179507181219615528382889984,
    -1650497416603706423024253737913692788809736912896,
    17950328578610802277327697770535083294270546771968,
    -3724970001243182786619005376755715492471782768640,
    -5981413341400069058756778898532874294556360704000,
)

P0_OVER_16_COEFFS = (
    -123282432000,
    58841859686400,
    -13099552866570240,
    1817269523720161280,
    -176880012691621796864,
    12880441893460632329216,
    -729910851392566766105088,
    33014141392329879832166784,
    -1210942171584302533599014752,
    36308844474092544015578885632,
    -889129088058672919373638221264,
    17508381271590013090109310169040,
    -263494886656617518206756373588932,
    2493591715504400008185935972185648,
    5772652777357046820837948335210000,
    -880112646375062548999453842320020740,
    23493494316713860255651067234081149257,
    -438058417861614862884693737035489286345,
    6643943767863126335261566491851505292189,
    -86756699901268061114746560625886582904365,
    1006186625234680761751520210312145980149549,
    -10573522222931154420271493264607253396390520,
    101894357518227690884588911318694326634020120,
    -904489874897014837177389619617321458811380360,
    7377025197157259422622822297421365236335307120,
    -54857750379533672661182684179932897350723993600,
    368077157510764846299472690339090755869412496960,
    -2203473576836831766402446311571835988588370992640,
    11638948368194240385082022186232592838207372154880,
    -53640316561668843524196008022033100643589470191616,
    213035315257870225008043406258186703365521254907904,
    -717584853510007605413068883853037631249102250442752,
    2000779126900084461641442809746125018650394950107136,
    -4414463297786097513664235192893813927566161255333888,
    6904891435787610921130882736916279097844736823656448,
    -4551724050684467601081502988404586537388373763424256,
    -11571837065995769727688883612933393577503693010370560,
    43604071314966497936511910817544815142484611319201792,
    -64046695475293378492360343847354456353947960484036608,
    17229520899952062417015850756255391466062797246300160,
    98913305027317465024954824787190137389180923821424640,
    -145693357979556257119098588624331861246512084740472832,
    -1743763200037842518500493452602647084799741447372800,
    159968299464829816606333313819738117801053481636724736,
    -68453133710464189864730237770717937227743579749744640,
    -84974525390992986946108353023934616304288806232653824,
    41407097440632033071894561954752886956699467613470720,
    28698609854675644415679733396189051258415886630912000,
)
