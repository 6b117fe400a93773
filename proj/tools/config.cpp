#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace deev::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double get_real(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

std::optional<double> opt_real(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return get_real(obj, key, where);
}

long long get_int(const json& v, const std::string& name) {
  if (!v.is_number_integer()) throw ConfigError(name + " must be an integer");
  return v.get<long long>();
}

CouplerConfig parse_coupler(const json& c) {
  if (!c.is_object() || !c.contains("type") || !c["type"].is_string()) {
    throw ConfigError("coupler needs a string 'type' (bs or dcdc)");
  }
  CouplerConfig out;
  out.type = c["type"].get<std::string>();
  if (out.type == "bs") {
    reject_unknown(c, "coupler", {"type", "theta", "phi"});
    out.theta = opt_real(c, "theta", "coupler").value_or(0.0);
    out.phi = opt_real(c, "phi", "coupler").value_or(0.0);
  } else if (out.type == "dcdc") {
    reject_unknown(c, "coupler", {"type", "g", "delta", "t", "ratio"});
    out.g = opt_real(c, "g", "coupler").value_or(1.0);
    out.delta = opt_real(c, "delta", "coupler").value_or(0.0);
    out.t = opt_real(c, "t", "coupler");
    out.ratio = opt_real(c, "ratio", "coupler");
    if (out.t.has_value() == out.ratio.has_value()) {
      throw ConfigError("dcdc coupler needs exactly one of 't' or 'ratio'");
    }
  } else {
    throw ConfigError("coupler type must be bs or dcdc, got '" + out.type + "'");
  }
  try {
    (void)out.build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("coupler: ") + e.what());
  } catch (const InfeasibleRatio& e) {
    throw ConfigError(std::string("coupler: ") + e.what());
  }
  return out;
}

Axis parse_axis(const std::string& label, const json& v) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError("grid." + label + " must be [min, max, count]");
  }
  const long long count = get_int(v[2], "grid." + label + " count");
  if (count < 2 || count > 100000) throw ConfigError("grid." + label + " count out of range");
  Axis a{label, v[0].get<double>(), v[1].get<double>(), static_cast<int>(count)};
  try {
    GridSpec{a, a}.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("grid." + label + ": " + e.what());
  }
  return a;
}

std::map<std::string, Axis> default_axes(const DeevParams& p) {
  return {{"x", {"x", p.x0() - 20.0, p.x0() + 20.0, 301}},
          {"y", {"y", p.y0() - 20.0, p.y0() + 20.0, 301}},
          {"px", {"px", p.px0() - 1.0, p.px0() + 1.0, 301}},
          {"py", {"py", p.py0() - 1.0, p.py0() + 1.0, 301}},
          {"r", {"r", -2.0, 2.0, 201}},
          {"s", {"s", -2.0, 2.0, 201}}};
}

DeevParams parse_state(const json& s, const std::optional<CouplerConfig>& coupler) {
  reject_unknown(s, "state", {"m", "sigma_x", "sigma_y", "zeta_x", "zeta_y", "eta_x", "eta_y", "sign",
                              "x0", "y0", "px0", "py0"});
  const long long m = s.contains("m") ? get_int(s["m"], "state.m") : 0;
  if (m < 0 || m > 60) throw ConfigError("state.m must be in 0..60");
  const long long sign = s.contains("sign") ? get_int(s["sign"], "state.sign") : 1;
  if (sign != 1 && sign != -1) throw ConfigError("state.sign must be +1 or -1");

  const bool has_sigma = s.contains("sigma_x") || s.contains("sigma_y");
  const bool has_zeta = s.contains("zeta_x") || s.contains("zeta_y");
  if (has_sigma && has_zeta) throw ConfigError("state: give sigma_x/sigma_y or zeta_x/zeta_y, not both");
  double sx = 1.0, sy = 1.0;
  if (has_zeta) {
    sx = std::exp(2.0 * opt_real(s, "zeta_x", "state").value_or(0.0));
    sy = std::exp(2.0 * opt_real(s, "zeta_y", "state").value_or(0.0));
  } else {
    sx = opt_real(s, "sigma_x", "state").value_or(1.0);
    sy = opt_real(s, "sigma_y", "state").value_or(1.0);
  }

  const Displacement d{opt_real(s, "x0", "state").value_or(0.0), opt_real(s, "y0", "state").value_or(0.0),
                       opt_real(s, "px0", "state").value_or(0.0),
                       opt_real(s, "py0", "state").value_or(0.0)};
  const bool has_eta = s.contains("eta_x") || s.contains("eta_y");
  if (has_eta && coupler) throw ConfigError("state: eta_x/eta_y conflict with the coupler block");
  if (has_eta && !(s.contains("eta_x") && s.contains("eta_y"))) {
    throw ConfigError("state: eta_x and eta_y must be given together");
  }
  const int mi = static_cast<int>(m);
  const int si = static_cast<int>(sign);
  try {
    if (coupler) return DeevParams::from_coupler(mi, coupler->build(), si, sx, sy, d);
    if (has_eta) {
      return DeevParams::general(mi, get_real(s, "eta_x", "state"), get_real(s, "eta_y", "state"), si, sx, sy, d);
    }
    return DeevParams::tied(mi, sx, sy, d, si);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("state: ") + e.what());
  }
}

QuadratureSpec parse_quadrature(const json& q) {
  reject_unknown(q, "quadrature", {"abs_tol", "rel_tol", "max_subdivisions", "truncation_radius"});
  QuadratureSpec out;
  out.abs_tol = opt_real(q, "abs_tol", "quadrature").value_or(out.abs_tol);
  out.rel_tol = opt_real(q, "rel_tol", "quadrature").value_or(out.rel_tol);
  out.truncation_radius = opt_real(q, "truncation_radius", "quadrature").value_or(out.truncation_radius);
  if (q.contains("max_subdivisions")) {
    const long long n = get_int(q["max_subdivisions"], "quadrature.max_subdivisions");
    if (n < 1 || n > 1000000) throw ConfigError("quadrature.max_subdivisions out of range");
    out.max_subdivisions = static_cast<int>(n);
  }
  try {
    out.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("quadrature: ") + e.what());
  }
  return out;
}

}  // namespace

ModeCoupler CouplerConfig::build() const {
  if (type == "bs") return bs_coupler(theta, phi);
  return dcdc_coupler({g, delta, dcdc_time()});
}

double CouplerConfig::dcdc_time() const {
  if (t) return *t;
  return dcdc_time_for_ratio(ratio.value_or(1.0), g, delta);
}

GridSpec RunConfig::grid(const std::string& label1, const std::string& label2) const {
  return GridSpec{axes.at(label1), axes.at(label2)};
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(doc, "config", {"state", "coupler", "grid", "quadrature", "sit", "verify", "output"});
  RunConfig cfg;
  if (doc.contains("coupler")) cfg.coupler = parse_coupler(doc["coupler"]);
  cfg.params = parse_state(doc.contains("state") ? doc["state"] : json::object(), cfg.coupler);
  cfg.axes = default_axes(cfg.params);

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    reject_unknown(g, "grid", {"x", "y", "px", "py", "r", "s"});
    for (const auto& [label, value] : g.items()) cfg.axes[label] = parse_axis(label, value);
  }
  if (doc.contains("quadrature")) cfg.quadrature = parse_quadrature(doc["quadrature"]);

  if (doc.contains("sit")) {
    const json& s = doc["sit"];
    reject_unknown(s, "sit", {"orders", "form"});
    if (s.contains("orders")) {
      if (!s["orders"].is_array() || s["orders"].empty()) throw ConfigError("sit.orders must be a non-empty array");
      cfg.sit_orders.clear();
      for (const json& o : s["orders"]) {
        const long long m = get_int(o, "sit.orders entry");
        if (m < 1 || m > 60) throw ConfigError("sit.orders entries must be in 1..60");
        cfg.sit_orders.push_back(static_cast<int>(m));
      }
    }
    if (s.contains("form")) {
      if (!s["form"].is_string()) throw ConfigError("sit.form must be a string");
      try {
        cfg.sit_form = parse_sit_form(s["form"].get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }

  if (doc.contains("verify")) {
    const json& v = doc["verify"];
    reject_unknown(v, "verify", {"random_points", "marginal_points", "seed"});
    if (v.contains("random_points")) {
      const long long n = get_int(v["random_points"], "verify.random_points");
      if (n < 0 || n > 100000) throw ConfigError("verify.random_points out of range");
      cfg.verify.random_points = static_cast<int>(n);
    }
    if (v.contains("marginal_points")) {
      const long long n = get_int(v["marginal_points"], "verify.marginal_points");
      if (n < 0 || n > 100000) throw ConfigError("verify.marginal_points out of range");
      cfg.verify.marginal_points = static_cast<int>(n);
    }
    if (v.contains("seed")) {
      const long long n = get_int(v["seed"], "verify.seed");
      if (n < 0) throw ConfigError("verify.seed must be non-negative");
      cfg.verify.seed = static_cast<unsigned long long>(n);
    }
  }

  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("output must be a string");
    cfg.output = doc["output"].get<std::string>();
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace deev::cli
