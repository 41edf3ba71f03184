#pragma once

#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "cremona/chunk.hpp"
#include "cremona/format.hpp"
#include "cremona/sofic.hpp"
#include "cremona/specialize.hpp"

namespace cremona {

using Json = nlohmann::ordered_json;

/// Exact rational as "num/den", denominator always present.
inline std::string rational_text(const Rational& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

inline Json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

inline Json to_json(const SpecializationPlan& plan) {
  Json primes = Json::array();
  for (const auto& p : plan.bad_primes) primes.push_back(integer_json(p));
  return Json{{"c1", rational_text(plan.c1)},
              {"c2", rational_text(plan.c2)},
              {"badPrimes", primes},
              {"chosenPrime", plan.chosen_prime}};
}

inline Json to_json(const FiniteMap& f, const Chunk& E) {
  Json images = Json::object();
  for (std::size_t i = 0; i < E.size(); ++i) images[E.label(i)] = f[i].images();
  return Json{{"n", f.n}, {"images", images}};
}

/// "inf" for an exact report, null when epsilon >= 1.
inline Json certificate_json(const std::optional<Rational>& r, const Rational& epsilon) {
  if (r) return rational_text(*r);
  if (epsilon == 0) return "inf";
  return nullptr;
}

inline Json to_json(const DefectReport& r) {
  Json singular = Json::object(), moved = Json::object();
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    singular[r.labels[i]] = r.singular_counts[i];
    moved[r.labels[i]] = r.moved_from_regular[i];
  }
  Json defects = Json::array();
  for (const auto& pd : r.product_defects) {
    defects.push_back({{"g", r.labels[pd.triple.x]},
                       {"h", r.labels[pd.triple.y]},
                       {"gh", r.labels[pd.triple.z]},
                       {"defect", rational_text(pd.defect)}});
  }
  Json seps = Json::array();
  for (const auto& s : r.separations) {
    seps.push_back({{"u", r.labels[s.a]}, {"v", r.labels[s.b]}, {"distance", rational_text(s.distance)}});
  }
  return Json{{"p", r.p},
              {"m", r.m},
              {"d", r.d},
              {"n", r.n},
              {"singularCounts", singular},
              {"movedFromRegular", moved},
              {"productDefects", defects},
              {"separations", seps},
              {"epsilon", rational_text(r.epsilon)},
              {"certificate_r", certificate_json(r.certificate_r, r.epsilon)},
              {"measuredC", rational_text(r.measured_c)},
              {"checks",
               {{"locality", r.locality_holds},
                {"envelope", r.envelope_holds},
                {"agreementLocus", r.agreement_locus_holds},
                {"separationBound", r.separation_bound_holds}}}};
}

inline Json to_json(const Profile& prof) {
  Json reports = Json::array(), certs = Json::array();
  for (const auto& r : prof.reports) reports.push_back(to_json(r));
  for (const auto& pt : prof.points) {
    certs.push_back({{"m", pt.m},
                     {"n", pt.n},
                     {"epsilon", rational_text(pt.epsilon)},
                     {"r", certificate_json(pt.r, pt.epsilon)},
                     {"slope", pt.slope ? Json(*pt.slope) : Json(nullptr)}});
  }
  Json out{{"reports", reports}, {"certificates", certs}};
  out["fittedSlope"] = prof.fitted_slope ? Json(*prof.fitted_slope) : Json(nullptr);
  return out;
}

/// One row per report.
inline std::string to_csv(const Profile& prof) {
  std::ostringstream out;
  out << "p,m,d,n,epsilon,certificate_r,measured_C,max_defect,min_separation,slope\n";
  for (std::size_t i = 0; i < prof.reports.size(); ++i) {
    const auto& r = prof.reports[i];
    Rational worst = 0, closest = 1;
    for (const auto& pd : r.product_defects) worst = std::max(worst, pd.defect);
    for (const auto& s : r.separations) closest = std::min(closest, s.distance);
    const Json cert = certificate_json(r.certificate_r, r.epsilon);
    out << r.p << ',' << r.m << ',' << r.d << ',' << r.n << ',' << rational_text(r.epsilon) << ','
        << (cert.is_null() ? std::string() : cert.get<std::string>()) << ',' << rational_text(r.measured_c) << ','
        << rational_text(worst) << ',' << rational_text(closest) << ',';
    if (prof.points[i].slope) out << Json(*prof.points[i].slope).dump();
    out << '\n';
  }
  return out.str();
}

inline Json to_json(const FolnerRecord& rec) {
  return Json{{"n", rec.n},
              {"boundary", rec.boundary},
              {"r", rational_text(rec.r)},
              {"agreements", rec.agreements},
              {"minAgreement", rational_text(rec.min_agreement)},
              {"minSeparation", rational_text(rec.min_separation)},
              {"maxDefect", rational_text(rec.max_defect)},
              {"agreementOk", rec.agreement_ok},
              {"separationOk", rec.separation_ok},
              {"defectOk", rec.defect_ok}};
}

}  // namespace cremona
