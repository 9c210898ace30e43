#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>

namespace sw {

struct CertifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CertificateReport {
  std::string kind;
  nlohmann::json inputs;      // config echo
  nlohmann::json quantities;  // named reals: eigenvalues, bounds, slopes
  bool pass = false;
  double margin = 0.0;  // smallest slack encountered
  nlohmann::json to_json() const;
};

// kinds: cheeger_lower, muinf_decay_i, muinf_decay_ii, muinf_decay_iii,
// buser_fail_i, buser_fail_ii, unbound_blowup, kroger_trend,
// infsup_rho_decay, infsup_sigma_decay, small_big, zerorho_conv,
// planar_sharp, homogeneous_eq
CertificateReport run_certificate(const std::string& kind,
                                  const nlohmann::json& config);

}  // namespace sw
