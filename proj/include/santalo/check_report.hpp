#pragma once

#include <string>
#include <utility>
#include <vector>

namespace santalo {

enum class CheckStatus { pass, fail, not_applicable };
enum class CheckKind { inequality, identity };

std::string to_string(CheckStatus s);

/// One verification record. margin = rhs - lhs. An inequality passes when
/// margin >= -tol; an identity passes when |margin| <= tol.
struct CheckReport {
  std::string check_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  CheckStatus status = CheckStatus::not_applicable;
  CheckKind kind = CheckKind::inequality;
  std::vector<std::string> provenance;
  double est_error = 0.0;
  std::vector<std::pair<std::string, double>> details;
  std::string note;
  // Failed sub-comparisons of a composite check; nonempty forces fail.
  std::vector<std::string> failures;

  static CheckReport inequality(std::string id, double lhs, double rhs, double tol,
                                std::vector<std::string> provenance,
                                double est_error = 0.0);
  static CheckReport identity(std::string id, double lhs, double rhs, double tol,
                              std::vector<std::string> provenance,
                              double est_error = 0.0);
  static CheckReport not_applicable(std::string id, std::string reason,
                                    std::vector<std::string> provenance);

  bool passed() const { return status == CheckStatus::pass; }
  bool failed() const { return status == CheckStatus::fail; }
  CheckReport& add(std::string name, double value) {
    details.emplace_back(std::move(name), value);
    return *this;
  }
  /// Value of a detail entry; throws std::out_of_range if absent.
  double detail(const std::string& name) const;
  /// Records a failed sub-comparison.
  void fail_component(std::string why);
  /// Re-derives the status after lhs, rhs or tol changed.
  void refresh();
};

}  // namespace santalo
