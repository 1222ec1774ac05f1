// Generated by tests/oracles/gn_oracle.py from configs/table3.cfg. Do not edit.
#pragma once

#include <array>

namespace oracle {

inline constexpr std::array<double, 12> kLaunchDbm{{
    -3.0,
    -2.5,
    -2.0,
    -1.5,
    -1.0,
    -0.5,
    0.0,
    0.5,
    1.0,
    1.5,
    2.0,
    2.5}};

// tau = 0.0 years, nli_scale = 1.0
inline constexpr double kBolTau = 0.0;
inline constexpr double kBolNliScale = 1.0;
inline constexpr std::array<double, 12> kBolAse{{
    1.057805116098866e-15,
    9.012518801813006e-16,
    7.814524182919195e-16,
    4.968653147297827e-16,
    6.763912461795573e-16,
    4.998386296337097e-16,
    5.745300881334963e-16,
    4.838824726393786e-16,
    3.487428377646824e-16,
    3.1308279490118387e-16,
    2.0618858853204686e-16,
    2.652729119948405e-16}};

inline constexpr std::array<double, 12> kBolSci{{
    4.1041535831708494e-16,
    4.92768037135781e-16,
    6.141647234508976e-16,
    6.940245843657947e-16,
    8.9864113378223e-16,
    9.23174065898007e-16,
    1.467020281840847e-15,
    1.84197442384289e-15,
    2.6018580299129484e-15,
    2.7564166147726753e-15,
    1.9467709784941802e-15,
    3.666516130540005e-15}};

inline constexpr std::array<double, 12> kBolXci{{
    3.2512945484734385e-16,
    4.563654529898889e-16,
    4.778667131939576e-16,
    1.3334525375338513e-16,
    5.699090904035937e-16,
    6.772649109745772e-16,
    5.253937651291406e-16,
    2.3087471843446637e-16,
    9.319466337109357e-16,
    1.4745277269778563e-15,
    1.3910500225236094e-15,
    1.08569608030086e-15}};

inline constexpr std::array<double, 12> kBolSnr{{
    11.178793953127913,
    12.156199118609745,
    13.471316399499722,
    21.384292143613973,
    14.813051930763805,
    16.973964496365728,
    15.582731019733487,
    17.553949702906213,
    12.970096683622506,
    12.434235114745272,
    17.88813661378866,
    14.17665915496648}};

inline constexpr std::array<double, 12> kBolSnrB2b{{
    5.602668816657458,
    6.092531807678303,
    6.751651799582971,
    10.7175342225353,
    7.424112518756636,
    8.507134309621074,
    7.80986585213811,
    8.797815490831843,
    6.5004468767430215,
    6.231879899430271,
    8.96530570421146,
    7.105160583954393}};

inline constexpr std::array<double, 12> kBolPsi{{
    0.7913980053615798,
    0.8605929920153942,
    0.9536961655130731,
    1.5138919475110353,
    0.41748852721598667,
    0.47839131812446,
    0.2385852408307757,
    0.2687663229311669,
    0.09952752708311353,
    0.09541553176725959,
    0.06959292702588904,
    0.05515360416478426}};

inline constexpr double kBolJ1 = 2.3329261050347285;

// tau = 4.0 years, nli_scale = 1e-05
inline constexpr double kMidTau = 4.0;
inline constexpr double kMidNliScale = 1e-05;
inline constexpr std::array<double, 12> kMidAse{{
    1.3813786984348288e-15,
    1.17750164913142e-15,
    1.019814420822641e-15,
    6.5799133472184195e-16,
    8.749762350942342e-16,
    6.45458839912093e-16,
    7.462578736744743e-16,
    6.370683817016897e-16,
    4.708986476641425e-16,
    4.2085230930639095e-16,
    2.802753992255319e-16,
    3.6118977254145287e-16}};

inline constexpr std::array<double, 12> kMidSci{{
    3.990120022261783e-21,
    4.790765188146391e-21,
    5.971002084466299e-21,
    6.747411698663496e-21,
    8.736724657273235e-21,
    8.975237523948955e-21,
    1.426259247129547e-20,
    1.790795319942994e-20,
    2.5295656241541968e-20,
    2.679829811778671e-20,
    1.8926801111683515e-20,
    3.5646422893147505e-20}};

inline constexpr std::array<double, 12> kMidXci{{
    3.1932357172506987e-21,
    4.482160699007838e-21,
    4.6933337902978e-21,
    1.3096408850778896e-21,
    5.597321423606723e-21,
    6.6517089470717415e-21,
    5.160117336089774e-21,
    2.2675195560527954e-21,
    9.153047295375263e-21,
    1.4481968747103946e-20,
    1.3662098435499732e-20,
    1.0663086502954881e-20}};

inline constexpr std::array<double, 12> kMidSnr{{
    14.512591745258828,
    19.102712837952975,
    24.747669131206788,
    43.036257676471216,
    36.31253925421002,
    55.2307478541385,
    53.599379471679306,
    70.44662420422263,
    106.93029829538807,
    134.2417731811907,
    226.1645418044815,
    196.9104968632237}};

inline constexpr std::array<double, 12> kMidSnrB2b{{
    7.6163164154711005,
    10.025246208366827,
    12.987761383850332,
    22.58574908984364,
    19.057091501222136,
    28.98550850902601,
    28.12935421149582,
    36.97091393178824,
    56.11781827215321,
    70.45108404264673,
    118.69283878296348,
    103.34009775530926}};

inline constexpr std::array<double, 12> kMidPsi{{
    1.0758332888579527,
    1.4161036663405056,
    1.8345700575290174,
    3.190321856283335,
    1.0716590089070994,
    1.6299749266281824,
    0.8593295808181627,
    1.1294322554509342,
    0.8592128793344451,
    1.0786677143960335,
    0.9213497386974949,
    0.8021745291468589}};

inline constexpr double kMidJ1 = 2.486520593993531;

// tau = 10.0 years, nli_scale = 1.0
inline constexpr double kEolTau = 10.0;
inline constexpr double kEolNliScale = 1.0;
inline constexpr std::array<double, 12> kEolAse{{
    2.075069510511141e-15,
    1.7700710656265405e-15,
    1.5301279662047752e-15,
    1.0115816002719946e-15,
    1.293499888238251e-15,
    9.513027908351514e-16,
    1.1106960755239695e-15,
    9.6962334971792e-16,
    7.460489475631926e-16,
    6.617797263612366e-16,
    4.478275585396006e-16,
    5.786411108390918e-16}};

inline constexpr std::array<double, 12> kEolSci{{
    3.8279980121672897e-16,
    4.596112275988437e-16,
    5.728395131589889e-16,
    6.473258555043935e-16,
    8.381744016295831e-16,
    8.610565899952713e-16,
    1.3683091065898069e-15,
    1.718033765073174e-15,
    2.4267871960954472e-15,
    2.5709460204709516e-15,
    1.81577888955684e-15,
    3.4198078056432642e-15}};

inline constexpr std::array<double, 12> kEolXci{{
    3.1099339159311143e-16,
    4.3652347677293703e-16,
    4.57089899576829e-16,
    1.2754763402497702e-16,
    5.451304342990895e-16,
    6.478186104974216e-16,
    5.025505579496125e-16,
    2.208366871981852e-16,
    8.914272148539383e-16,
    1.4104178258049055e-15,
    1.3305695867617127e-15,
    1.0384919028964749e-15}};

inline constexpr std::array<double, 12> kEolSnr{{
    7.2403334845913,
    8.436578024369112,
    9.858487542826827,
    15.85140960835134,
    11.869797263175299,
    14.490836700034151,
    13.415814925918367,
    15.430921029084582,
    12.390195228440152,
    12.168803505858403,
    17.63845929737454,
    14.121900366168884}};

inline constexpr std::array<double, 12> kEolSnrB2b{{
    4.071538726545129,
    4.744236466295503,
    5.543834949205786,
    8.913902685295325,
    6.674877522714776,
    8.148796313014149,
    7.5442671439494,
    8.677444580403048,
    6.967518804128175,
    6.84302108946538,
    9.91883457560163,
    7.9413281661174855}};

inline constexpr std::array<double, 12> kEolPsi{{
    0.5751201315630513,
    0.6701412129210783,
    0.7830875006944954,
    1.2591222212093236,
    0.3753559471606701,
    0.4582404917366607,
    0.23047140981789113,
    0.2650890865743079,
    0.10667880680034421,
    0.10477263790106149,
    0.07699466739627733,
    0.0616443309115091}};

inline constexpr double kEolJ1 = 2.356137077721162;

// Calibrated BER at 1.1 x the back-to-back target, BER* = 4e-3, in modulation-table order.
inline constexpr std::array<double, 6> kBerAt110Percent{{
    0.0027052975101053067,
    0.0027052975101053015,
    0.0027420627844490226,
    0.0027768435688823624,
    0.002809660843695282,
    0.002840562810265589}};

}  // namespace oracle
