#include "santalo/check_report.hpp"

#include <cmath>
#include <stdexcept>

#include "santalo/errors.hpp"

namespace santalo {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::not_applicable: return "not_applicable";
  }
  return "not_applicable";
}

void CheckReport::refresh() {
  margin = rhs - lhs;
  if (std::isnan(margin)) {
    // inf - inf: both sides infinite in the same direction.
    margin = (lhs == rhs) ? 0.0 : margin;
  }
  bool ok;
  if (kind == CheckKind::identity)
    ok = std::abs(margin) <= tol || lhs == rhs;
  else
    ok = margin >= -tol;
  status = ok && failures.empty() ? CheckStatus::pass : CheckStatus::fail;
}

void CheckReport::fail_component(std::string why) {
  failures.push_back(std::move(why));
  if (status != CheckStatus::not_applicable) status = CheckStatus::fail;
}

CheckReport CheckReport::inequality(std::string id, double lhs, double rhs, double tol,
                                    std::vector<std::string> provenance,
                                    double est_error) {
  if (provenance.empty()) throw InvalidParameter("a check needs a provenance entry");
  CheckReport r;
  r.check_id = std::move(id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  r.kind = CheckKind::inequality;
  r.provenance = std::move(provenance);
  r.est_error = est_error;
  r.refresh();
  return r;
}

CheckReport CheckReport::identity(std::string id, double lhs, double rhs, double tol,
                                  std::vector<std::string> provenance,
                                  double est_error) {
  CheckReport r = inequality(std::move(id), lhs, rhs, tol, std::move(provenance), est_error);
  r.kind = CheckKind::identity;
  r.refresh();
  return r;
}

CheckReport CheckReport::not_applicable(std::string id, std::string reason,
                                        std::vector<std::string> provenance) {
  if (provenance.empty()) throw InvalidParameter("a check needs a provenance entry");
  CheckReport r;
  r.check_id = std::move(id);
  r.lhs = std::nan("");
  r.rhs = std::nan("");
  r.margin = std::nan("");
  r.status = CheckStatus::not_applicable;
  r.provenance = std::move(provenance);
  r.note = std::move(reason);
  return r;
}

double CheckReport::detail(const std::string& name) const {
  for (const auto& [k, v] : details)
    if (k == name) return v;
  throw std::out_of_range("no detail named " + name);
}

}  // namespace santalo
