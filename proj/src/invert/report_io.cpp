#include "tfalg/invert.hpp"
#include "tfalg/operator_io.hpp"

namespace tfalg {

using nlohmann::json;

nlohmann::json to_json(const InversionReport& r) {
  return json{{"mode", to_string(r.mode)},
              {"iterations", r.iterations},
              {"residual_av", r.residual_av},
              {"a_bound", r.a_bound},
              {"b_bound", r.b_bound},
              {"ratio", r.ratio},
              {"truncated_mass", r.truncated_mass},
              {"restarts", r.restarts},
              {"converged", r.converged},
              {"inverse", to_json(r.inverse)}};
}

nlohmann::json to_json(const DecayCertificate& c) {
  json tails = json::array();
  for (const auto& [r, s] : c.tails) tails.push_back({r, s});
  return json{{"delta", c.delta},
              {"c_const", c.c_const},
              {"r0", c.r0},
              {"certified", c.certified},
              {"regression_slope", c.regression_slope},
              {"tails", std::move(tails)}};
}

nlohmann::json to_json(const GelfandResult& g) {
  json dyadic = json::array();
  for (const auto& [n, e] : g.dyadic) dyadic.push_back({n, e});
  return json{{"estimates", g.estimates}, {"dyadic", std::move(dyadic)}, {"extrapolated", g.extrapolated}};
}

}  // namespace tfalg
