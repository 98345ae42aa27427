#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace scnp::milp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  bool integer = false;
  double objective = 0.0;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// Sparse minimisation model. Rows reference variables by index.
class LinearModel {
 public:
  int add_variable(std::string name, double lower, double upper, double objective = 0.0, bool integer = false);
  int add_binary(std::string name, double objective = 0.0) { return add_variable(std::move(name), 0.0, 1.0, objective, true); }
  int add_continuous(std::string name, double lower = 0.0, double upper = kInfinity, double objective = 0.0) {
    return add_variable(std::move(name), lower, upper, objective, false);
  }
  // Duplicate variable references in `terms` are merged.
  int add_row(std::string name, std::vector<Term> terms, Sense sense, double rhs);

  int variable_count() const { return static_cast<int>(variables_.size()); }
  int row_count() const { return static_cast<int>(rows_.size()); }
  const Variable& variable(int j) const { return variables_[static_cast<std::size_t>(j)]; }
  Variable& variable(int j) { return variables_[static_cast<std::size_t>(j)]; }
  const Row& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  std::span<const Variable> variables() const { return variables_; }
  std::span<const Row> rows() const { return rows_; }

  bool has_integers() const;
  // Throws InvalidArgument on dangling references, lower > upper or
  // non-finite right-hand sides.
  void check() const;

  double objective_value(std::span<const double> x) const;
  double row_activity(int i, std::span<const double> x) const;
  // Largest bound or row violation of x.
  double max_violation(std::span<const double> x) const;

  // Plain-text dump in an LP-format-like layout (see write_lp).
  std::string to_lp_string() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
};

// Grammar (write-only, one item per line):
//   "Minimize"  /  " obj: " term { (" + " | " - ") term }
//   "Subject To" / " <row>: " terms (" <= " | " = " | " >= ") rhs
//   "Bounds"     / " lo <= name <= up"   (inf printed as "inf")
//   "Binaries" / "Generals" / name list
//   "End"
// where term := coefficient " " name.
void write_lp(const LinearModel& model, std::ostream& out);

}  // namespace scnp::milp
