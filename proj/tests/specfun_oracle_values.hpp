#pragma once

// Reference values from tests/oracles/gen_specfun_oracles.py (mpmath, 30+
// significant digits). Do not edit by hand; regenerate and paste.

#include <array>

namespace fouvol::oracle {

struct MlRow {
  double alpha;
  double beta;
  double z;
  double value;
};

inline constexpr std::array<MlRow, 108> kMittagLeffler = {{
    {0.5, 0.5, -50, 0.00011277028156766193889},
    {0.5, 0.5, -20, 0.0007026087267299005751},
    {0.5, 0.5, -9, 0.0034200672077841296292},
    {0.5, 0.5, -4.5, 0.013007964315469907977},
    {0.5, 0.5, -1, 0.13660600739194928254},
    {0.5, 0.5, -0.3, 0.34380978317745974426},
    {0.5, 0.5, 0.7, 2.4812810553406781864},
    {0.5, 0.5, 2.5, 2590.101297015105027},
    {0.5, 0.5, 5, 720048993373.86939164},
    {0.5, 1, -50, 0.0112815362653237725},
    {0.5, 1, -20, 0.028174348741051319319},
    {0.5, 1, -9, 0.062307724037774684147},
    {0.5, 1, -4.5, 0.12248480427384141755},
    {0.5, 1, -1, 0.42758357615580700441},
    {0.5, 1, -0.3, 0.73459933456765514229},
    {0.5, 1, 0.7, 2.7387021025613169992},
    {0.5, 1, 2.5, 1035.8148429726229083},
    {0.5, 1, 5, 144009798674.66104041},
    {0.55, 0.55, -50, 0.00011253557505467602098},
    {0.55, 0.55, -20, 0.00070874022152318535419},
    {0.55, 0.55, -9, 0.0035216014590294479531},
    {0.55, 0.55, -4.5, 0.013809479914629957933},
    {0.55, 0.55, -1, 0.15333441989756001909},
    {0.55, 0.55, -0.3, 0.38316280449270111},
    {0.55, 0.55, 0.7, 2.4575315229042604828},
    {0.55, 0.55, 2.5, 763.90603005605483715},
    {0.55, 0.55, 5, 859788705.4187115654},
    {0.55, 1, -50, 0.01019725437826801311},
    {0.55, 1, -20, 0.025605611839809560829},
    {0.55, 1, -9, 0.057235875301157182688},
    {0.55, 1, -4.5, 0.11447412962474397299},
    {0.55, 1, -1, 0.42041169867489100888},
    {0.55, 1, -0.3, 0.73317933083265791014},
    {0.55, 1, 0.7, 2.6431159722012313304},
    {0.55, 1, 2.5, 360.76085121218881591},
    {0.55, 1, 5, 230413110.36107789154},
    {0.6, 0.6, -50, 0.00010979389735394112156},
    {0.6, 0.6, -20, 0.00069976531797853913557},
    {0.6, 0.6, -9, 0.003560053191752905303},
    {0.6, 0.6, -4.5, 0.014477139403597033393},
    {0.6, 0.6, -1, 0.17110228338391676025},
    {0.6, 0.6, -0.3, 0.42314119084161669911},
    {0.6, 0.6, 0.7, 2.4229061444885761819},
    {0.6, 0.6, 2.5, 306.9910462936009016},
    {0.6, 0.6, 5, 10895636.260188730456},
    {0.6, 1, -50, 0.0090837447731034541369},
    {0.6, 1, -20, 0.022946564273258375197},
    {0.6, 1, -9, 0.051918367383206690961},
    {0.6, 1, -4.5, 0.10598026464026231314},
    {0.6, 1, -1, 0.4133273409431062974},
    {0.6, 1, -0.3, 0.73218725509710486705},
    {0.6, 1, 0.7, 2.5535028434810130238},
    {0.6, 1, 2.5, 166.495716910569352},
    {0.6, 1, 5, 3726255.1002300527311},
    {0.75, 0.75, -50, 0.000086221380547165753602},
    {0.75, 0.75, -20, 0.00057356041295395037991},
    {0.75, 0.75, -9, 0.0032106265881956147541},
    {0.75, 0.75, -4.5, 0.015439124092629203291},
    {0.75, 0.75, -1, 0.23223772010096143194},
    {0.75, 0.75, -0.3, 0.54511154539096948581},
    {0.75, 0.75, 0.7, 2.2828073954775135153},
    {0.75, 0.75, 2.5, 53.86316203808337762},
    {0.75, 0.75, 5, 11778.623429457295115},
    {0.75, 1, -50, 0.0056311878629451302351},
    {0.75, 1, -20, 0.014527522154459504195},
    {0.75, 1, -9, 0.034453627956929501396},
    {0.75, 1, -4.5, 0.077054661036949091442},
    {0.75, 1, -1, 0.39310830281575406177},
    {0.75, 1, -0.3, 0.73190817511022037762},
    {0.75, 1, 0.7, 2.3177370962853351753},
    {0.75, 1, 2.5, 39.595959078515355029},
    {0.75, 1, 5, 6888.1316797401478446},
    {0.9, 0.9, -50, 0.000040536249580922198912},
    {0.9, 0.9, -20, 0.00028402595741192644328},
    {0.9, 0.9, -9, 0.0018823167357785742269},
    {0.9, 0.9, -4.5, 0.014042962280011375009},
    {0.9, 0.9, -1, 0.30814879777662194201},
    {0.9, 0.9, -0.3, 0.66532303683405558466},
    {0.9, 0.9, 0.7, 2.1219254645440981288},
    {0.9, 0.9, 2.5, 19.598053891254125463},
    {0.9, 0.9, 5, 524.92592092723252683},
    {0.9, 1, -50, 0.0021753530768569765492},
    {0.9, 1, -20, 0.0057495078161091138828},
    {0.9, 1, -9, 0.014646307996637194437},
    {0.9, 1, -4.5, 0.04109564631269347649},
    {0.9, 1, -1, 0.37606602142464188118},
    {0.9, 1, -0.3, 0.73584527664843057836},
    {0.9, 1, 0.7, 2.1240621309182168454},
    {0.9, 1, 2.5, 17.66851594965390609},
    {0.9, 1, 5, 438.95181466448276021},
    {0.99, 0.99, -50, 4.3275569913143254672e-6},
    {0.99, 0.99, -20, 0.00003130100920891222507},
    {0.99, 0.99, -9, 0.00034378400949603617666},
    {0.99, 0.99, -4.5, 0.011486912578437141205},
    {0.99, 0.99, -1, 0.36159131535572008744},
    {0.99, 0.99, -0.3, 0.73352060960897251992},
    {0.99, 0.99, 0.7, 2.0244878718049554725},
    {0.99, 0.99, 2.5, 12.712693985003872965},
    {0.99, 0.99, 5, 165.38195991191360991},
    {0.99, 1, -50, 0.00020957649900600752844},
    {0.99, 1, -20, 0.00056162348367495244904},
    {0.99, 1, -9, 0.0016226341799909755874},
    {0.99, 1, -4.5, 0.01439600153143346649},
    {0.99, 1, -1, 0.36854831806033961629},
    {0.99, 1, -0.3, 0.74023850142995858466},
    {0.99, 1, 0.7, 2.0241932107178126024},
    {0.99, 1, 2.5, 12.592519928526251513},
    {0.99, 1, 5, 162.71337643708983261},
}};

// E_{0.6,1}(-2.5)
inline constexpr double kMl06_1_m2_5 = 0.19091670740116979127;
// E_theta(0.3) for alpha 0.6, theta 1.7
inline constexpr double kETheta_06_17_at_03 = 0.320608060948620229;
// int_0.2^0.7 theta E_theta(1 - s) ds, alpha 0.6, theta 1.7
inline constexpr double kIntThetaE_06_17_u1_02_07 = 0.14129664715787844557;
// int_0^1 s^-0.3 (1-s)^-0.4 cos(s) ds
inline constexpr double kWeaklySingularCos = 1.749757535160393521;
// int_0^0.5 E_theta(r)^2 dr, alpha 0.6, theta 1.7
inline constexpr double kIntEThetaSq_06_17_05 = 2.2673676117295463011;
// sigma2_Y for alpha 0.6, theta 5.9, t 0.1, Delta 30/365 (double quadrature)
inline constexpr double kSigma2Y_06_59_01 = 0.0001340123502776119;
// sigma2_M for alpha 0.614, t 0.2, Delta 30/365 (double quadrature)
inline constexpr double kSigma2M_0614_02 = 0.007563046460106744774;
// BS call, mu 0, sigma2 0.04, K 1
inline constexpr double kBlackScholes_0_004_1 = 0.090961531793282115325;
// implied vol of 0.07966 at F = K = T = 1
inline constexpr double kImpliedVol_007966 = 0.2000108966352473887;

}  // namespace fouvol::oracle
