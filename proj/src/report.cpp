#include "ngd/report.hpp"

#include "ngd/error.hpp"

namespace ngd {

using nlohmann::json;

namespace {

Rational rational_field(const json& doc, const char* key) {
  return ExactReal::parse(doc.at(key).get<std::string>()).as_rational();
}

}  // namespace

json to_json(const Enclosure& e) { return {{"lo", format_rational(e.lo)}, {"hi", format_rational(e.hi)}}; }

Enclosure enclosure_from_json(const json& doc) {
  return {parse_rational(doc.at("lo").get<std::string>()), parse_rational(doc.at("hi").get<std::string>())};
}

json to_json(const ViolationCertificate& cert) {
  json points = json::object();
  for (const auto& [name, value] : cert.points) points[name] = value.str();
  json doc{{"kind", to_string(cert.kind)},
           {"points", points},
           {"lhs", cert.lhs.str()},
           {"rhs", cert.rhs.str()},
           {"value", cert.value().str()}};
  if (!cert.form.empty()) doc["form"] = cert.form;
  return doc;
}

ViolationCertificate certificate_from_json(const json& doc) {
  try {
    ViolationCertificate cert;
    cert.kind = parse_violation_kind(doc.at("kind").get<std::string>());
    cert.form = doc.value("form", std::string());
    for (const auto& [name, value] : doc.at("points").items())
      cert.points.emplace_back(name, ExactReal::parse(value.get<std::string>()));
    cert.lhs = ExactReal::parse(doc.at("lhs").get<std::string>());
    cert.rhs = ExactReal::parse(doc.at("rhs").get<std::string>());
    return cert;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("certificate document: ") + e.what());
  }
}

json to_json(const CheckResult& result) {
  json doc{{"checked", result.checked},
           {"outcome", result.passed() ? "no violation found on grid" : "violation found"}};
  if (result.violation) doc["certificate"] = to_json(*result.violation);
  return doc;
}

json to_json(const TransferReport& report) {
  return {{"v", format_rational(report.v)},
          {"monotone", to_json(report.monotone)},
          {"rational_points", report.rational_points},
          {"rational_equal", report.rational_equal},
          {"irrational_probes", report.irrational_probes},
          {"worst_bound", format_rational(report.worst_bound)},
          {"within_2eps", report.within_tolerance}};
}

json to_json(const VerificationReport& report) {
  return {{"checks", report.checks}, {"passed", report.passed()}, {"failures", report.failures}};
}

json to_json(const UniquenessReport& report) {
  json additive = json::object();
  for (const auto& [m, e] : report.additive_intersection) additive[std::to_string(m)] = to_json(e);
  json probes = json::array();
  for (const auto& p : report.probe_intersection) {
    json entry = to_json(p.g);
    entry["x"] = p.x.str();
    probes.push_back(entry);
  }
  return {{"passed", report.passed()},
          {"discrepancies", report.discrepancies},
          {"additive_intersection", additive},
          {"probe_intersection", probes}};
}

json to_json(const DecompositionResult& result) {
  json additive = json::object();
  for (const auto& [m, e] : result.additive) additive[std::to_string(m)] = to_json(e);

  const ResidualReport& r = result.residuals;
  json failures = json::array();
  for (const JensenResidual& j : r.jensen_failures)
    failures.push_back({{"x", j.x.str()}, {"y", j.y.str()}, {"bound", format_rational(j.bound)}});
  json transfer = json::array();
  for (const TransferReport& t : r.transfer) transfer.push_back(to_json(t));
  json probes = json::array();
  for (const ProbeEnclosure& p : result.convex_probes) {
    json entry = to_json(p.g);
    entry["x"] = p.x.str();
    probes.push_back(entry);
  }

  return {{"additive", additive},
          {"rational_coefficient", format_rational(result.rational_coefficient)},
          {"constant", format_rational(result.constant)},
          {"residuals",
           {{"rational_points", r.rational_points},
            {"phi_zero_on_rationals", r.phi_zero_on_rationals},
            {"jensen_pairs", r.jensen_pairs},
            {"jensen_worst_bound", format_rational(r.jensen_worst_bound)},
            {"jensen_tolerance", format_rational(r.jensen_tolerance)},
            {"jensen_ok", r.jensen_ok},
            {"jensen_failures", failures},
            {"transfer", transfer},
            {"transfer_ok", r.transfer_ok}}},
          {"convex_probes", probes},
          {"eps", format_rational(result.eps)},
          {"seed", result.seed},
          {"grid", {{"rationals", result.grid_rationals}, {"probes", result.grid_probes}}}};
}

DecompositionResult decomposition_from_json(const json& doc) {
  try {
    DecompositionResult out;
    for (const auto& [key, value] : doc.at("additive").items())
      out.additive[std::stoull(key)] = enclosure_from_json(value);
    out.rational_coefficient = rational_field(doc, "rational_coefficient");
    out.constant = rational_field(doc, "constant");
    out.eps = rational_field(doc, "eps");
    out.seed = doc.value("seed", std::uint64_t{0});
    const json& r = doc.at("residuals");
    out.residuals.rational_points = r.value("rational_points", std::size_t{0});
    out.residuals.phi_zero_on_rationals = r.at("phi_zero_on_rationals").get<bool>();
    out.residuals.jensen_pairs = r.value("jensen_pairs", std::size_t{0});
    out.residuals.jensen_worst_bound = rational_field(r, "jensen_worst_bound");
    out.residuals.jensen_tolerance = rational_field(r, "jensen_tolerance");
    out.residuals.jensen_ok = r.at("jensen_ok").get<bool>();
    out.residuals.transfer_ok = r.at("transfer_ok").get<bool>();
    for (const json& p : doc.at("convex_probes"))
      out.convex_probes.push_back({ExactReal::parse(p.at("x").get<std::string>()), enclosure_from_json(p)});
    if (doc.contains("grid")) {
      out.grid_rationals = doc.at("grid").value("rationals", std::size_t{0});
      out.grid_probes = doc.at("grid").value("probes", std::size_t{0});
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("decomposition document: ") + e.what());
  }
}

}  // namespace ngd
