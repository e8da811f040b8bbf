#include "fouvol/presets.hpp"

namespace fouvol::presets {

namespace {

ModelParams make(double hurst, double eta, double theta, double gamma, double mu1, double mu2,
                 double q1, double q2, double xi0) {
  ModelParams mp;
  mp.alpha = hurst + 0.5;
  mp.rho = -0.95;
  mp.eta = eta;
  mp.theta = theta;
  mp.gamma = gamma;
  mp.xi0 = ForwardCurve(xi0);
  mp.x0 = 0.0;
  mp.ctmc = ctmc::CtmcSpec::two_state(mu1, mu2, q1, q2);
  return mp;
}

}  // namespace

ModelParams spx_calibrated() {
  return make(0.0846, -0.3021, 1.6672, 0.3367, 0.0005, 16.0288, 0.0193, 14.4128, 0.0553);
}

ModelParams vix_calibrated() {
  return make(0.0938, 0.1373, 5.9165, 0.1751, 0.1239, 4.8671, 0.699, 13.4365, 0.0654);
}

ModelParams joint_calibrated() {
  return make(0.114, -0.3792, 5.6312, 0.2468, 1.004, 6.7563, 0.2821, 10.1285, 0.0462);
}

}  // namespace fouvol::presets
