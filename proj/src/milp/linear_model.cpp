#include "scnp/milp/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "scnp/error.hpp"

namespace scnp::milp {

int LinearModel::add_variable(std::string name, double lower, double upper, double objective, bool integer) {
  variables_.push_back({std::move(name), lower, upper, integer, objective});
  return variable_count() - 1;
}

int LinearModel::add_row(std::string name, std::vector<Term> terms, Sense sense, double rhs) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  rows_.push_back({std::move(name), std::move(merged), sense, rhs});
  return row_count() - 1;
}

bool LinearModel::has_integers() const {
  return std::any_of(variables_.begin(), variables_.end(), [](const Variable& v) { return v.integer; });
}

void LinearModel::check() const {
  for (const auto& v : variables_) {
    if (v.lower > v.upper) throw Error(ErrorKind::kInvalidArgument, "variable " + v.name + " has lower > upper");
    if (std::isnan(v.lower) || std::isnan(v.upper) || !std::isfinite(v.objective)) {
      throw Error(ErrorKind::kInvalidArgument, "variable " + v.name + " has invalid data");
    }
  }
  for (const auto& r : rows_) {
    if (!std::isfinite(r.rhs)) throw Error(ErrorKind::kInvalidArgument, "row " + r.name + " has a non-finite rhs");
    for (const auto& t : r.terms) {
      if (t.var < 0 || t.var >= variable_count()) {
        throw Error(ErrorKind::kInvalidArgument, "row " + r.name + " references a missing variable");
      }
      if (!std::isfinite(t.coef)) throw Error(ErrorKind::kInvalidArgument, "row " + r.name + " has a non-finite coefficient");
    }
  }
}

double LinearModel::objective_value(std::span<const double> x) const {
  double total = 0.0;
  for (int j = 0; j < variable_count(); ++j) total += variable(j).objective * x[static_cast<std::size_t>(j)];
  return total;
}

double LinearModel::row_activity(int i, std::span<const double> x) const {
  double total = 0.0;
  for (const auto& t : row(i).terms) total += t.coef * x[static_cast<std::size_t>(t.var)];
  return total;
}

double LinearModel::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < variable_count(); ++j) {
    const double xj = x[static_cast<std::size_t>(j)];
    worst = std::max({worst, variable(j).lower - xj, xj - variable(j).upper});
  }
  for (int i = 0; i < row_count(); ++i) {
    const double activity = row_activity(i, x);
    const double rhs = row(i).rhs;
    switch (row(i).sense) {
      case Sense::kLessEqual: worst = std::max(worst, activity - rhs); break;
      case Sense::kGreaterEqual: worst = std::max(worst, rhs - activity); break;
      case Sense::kEqual: worst = std::max(worst, std::abs(activity - rhs)); break;
    }
  }
  return worst;
}

namespace {

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void write_terms(std::ostream& out, const LinearModel& model, const std::vector<Term>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    const double magnitude = std::abs(t.coef);
    if (first) {
      out << (t.coef < 0 ? "- " : "");
    } else {
      out << (t.coef < 0 ? " - " : " + ");
    }
    out << format_number(magnitude) << " " << model.variable(t.var).name;
    first = false;
  }
  if (first) out << "0";
}

}  // namespace

void write_lp(const LinearModel& model, std::ostream& out) {
  out << "Minimize\n obj: ";
  std::vector<Term> objective;
  for (int j = 0; j < model.variable_count(); ++j) {
    if (model.variable(j).objective != 0.0) objective.push_back({j, model.variable(j).objective});
  }
  write_terms(out, model, objective);
  out << "\nSubject To\n";
  for (const auto& r : model.rows()) {
    out << " " << r.name << ": ";
    write_terms(out, model, r.terms);
    switch (r.sense) {
      case Sense::kLessEqual: out << " <= "; break;
      case Sense::kEqual: out << " = "; break;
      case Sense::kGreaterEqual: out << " >= "; break;
    }
    out << format_number(r.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : model.variables()) {
    out << " " << format_number(v.lower) << " <= " << v.name << " <= " << format_number(v.upper) << "\n";
  }
  std::vector<std::string> binaries;
  std::vector<std::string> generals;
  for (const auto& v : model.variables()) {
    if (!v.integer) continue;
    (v.lower == 0.0 && v.upper == 1.0 ? binaries : generals).push_back(v.name);
  }
  if (!binaries.empty()) {
    out << "Binaries\n";
    for (const auto& name : binaries) out << " " << name << "\n";
  }
  if (!generals.empty()) {
    out << "Generals\n";
    for (const auto& name : generals) out << " " << name << "\n";
  }
  out << "End\n";
}

std::string LinearModel::to_lp_string() const {
  std::ostringstream os;
  write_lp(*this, os);
  return os.str();
}

}  // namespace scnp::milp
