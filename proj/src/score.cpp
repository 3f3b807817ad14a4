#include "pbls/score.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace pbls {

Rational::Rational(Int n, Int d) {
  if (d == 0) throw std::invalid_argument("zero denominator");
  if (d < 0) {
    n = checked_neg(n);
    d = checked_neg(d);
  }
  const unsigned long long an =
      n < 0 ? 0ULL - static_cast<unsigned long long>(n) : static_cast<unsigned long long>(n);
  const unsigned long long g = std::gcd(an, static_cast<unsigned long long>(d));
  if (g > 1) {
    n /= static_cast<Int>(g);
    d /= static_cast<Int>(g);
  }
  num = n;
  den = d;
}

Rational competition_score(Int cost_best, Int cost_s, Int negative_offset) {
  if (negative_offset < 0) throw std::invalid_argument("negative offset must be non-negative");
  if (cost_best > cost_s) throw std::invalid_argument("cost_best exceeds cost_s");
  const Int num = checked_add(checked_add(1, cost_best), negative_offset);
  const Int den = checked_add(checked_add(1, cost_s), negative_offset);
  if (num <= 0 || den <= 0)
    throw std::invalid_argument("cost below the instance's negative offset");
  return Rational(num, den);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

Int parse_int_field(const std::string& s, int line_no, const char* what) {
  Int value = 0;
  const char* begin = s.data() + (!s.empty() && s[0] == '+' ? 1 : 0);
  auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("result csv line " + std::to_string(line_no) + ": bad " + what +
                             " '" + s + "'");
  return value;
}

}  // namespace

std::vector<ResultRow> parse_result_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  int line_no = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::vector<std::string> f = split_csv(t);
    const bool is_header = first_data_line && !f.empty() && lower(f[0]) == "instance";
    first_data_line = false;
    if (is_header) continue;
    if (f.size() != 4 && f.size() != 5)
      throw std::runtime_error("result csv line " + std::to_string(line_no) +
                               ": expected instance,solver,cost,status[,offset]");
    ResultRow row;
    row.instance = f[0];
    row.solver = f[1];
    const std::string status = lower(f[3]);
    if (status == "feasible" || status == "sat" || status == "satisfiable" || status == "ok" ||
        status == "solved") {
      row.feasible = true;
      row.cost = parse_int_field(f[2], line_no, "cost");
    } else if (status == "infeasible" || status == "unknown" || status == "timeout" ||
               status == "none" || status == "-") {
      row.feasible = false;
    } else {
      throw std::runtime_error("result csv line " + std::to_string(line_no) +
                               ": unknown status '" + f[3] + "'");
    }
    if (f.size() == 5) row.offset = parse_int_field(f[4], line_no, "offset");
    if (row.offset < 0)
      throw std::runtime_error("result csv line " + std::to_string(line_no) +
                               ": negative offset");
    rows.push_back(std::move(row));
  }
  return rows;
}

ScoreReport build_score_report(const std::vector<ResultRow>& rows) {
  std::vector<std::string> instances, solvers;
  std::set<std::pair<std::string, std::string>> seen;
  std::map<std::string, Int> offsets;
  for (const ResultRow& r : rows) {
    if (!seen.insert({r.instance, r.solver}).second)
      throw std::runtime_error("duplicate result for instance '" + r.instance + "', solver '" +
                               r.solver + "'");
    if (std::find(instances.begin(), instances.end(), r.instance) == instances.end())
      instances.push_back(r.instance);
    if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end())
      solvers.push_back(r.solver);
    auto [it, fresh] = offsets.try_emplace(r.instance, r.offset);
    if (!fresh && it->second != r.offset)
      throw std::runtime_error("inconsistent offsets for instance '" + r.instance + "'");
  }

  ScoreReport report;
  report.num_instances = static_cast<int>(instances.size());
  std::map<std::pair<std::string, std::string>, const ResultRow*> by_key;
  for (const ResultRow& r : rows) by_key[{r.instance, r.solver}] = &r;

  std::map<std::string, SolverSummary> summary;
  for (const std::string& s : solvers) summary[s].solver = s;

  for (const std::string& inst : instances) {
    std::optional<Int> cost_best;
    for (const std::string& s : solvers) {
      auto it = by_key.find({inst, s});
      if (it != by_key.end() && it->second->feasible)
        cost_best = cost_best ? std::min(*cost_best, it->second->cost) : it->second->cost;
    }
    for (const std::string& s : solvers) {
      auto it = by_key.find({inst, s});
      if (it == by_key.end() || !it->second->feasible || !cost_best) continue;
      SolverSummary& sum = summary[s];
      sum.avg_score += competition_score(*cost_best, it->second->cost, offsets[inst]).to_double();
      ++sum.solved;
      if (it->second->cost == *cost_best) ++sum.wins;
    }
  }

  for (const std::string& s : solvers) {
    SolverSummary sum = summary[s];
    if (report.num_instances > 0) sum.avg_score /= report.num_instances;
    report.solvers.push_back(std::move(sum));
  }
  std::sort(report.solvers.begin(), report.solvers.end(),
            [](const SolverSummary& a, const SolverSummary& b) {
              if (a.avg_score != b.avg_score) return a.avg_score > b.avg_score;
              if (a.wins != b.wins) return a.wins > b.wins;
              return a.solver < b.solver;
            });
  return report;
}

void print_score_report(const ScoreReport& report, std::ostream& out) {
  out << "instances: " << report.num_instances << '\n';
  out << std::left << std::setw(24) << "solver" << std::right << std::setw(10) << "avg_sc*"
      << std::setw(8) << "#win" << std::setw(10) << "solved" << '\n';
  for (const SolverSummary& s : report.solvers) {
    out << std::left << std::setw(24) << s.solver << std::right << std::setw(10) << std::fixed
        << std::setprecision(4) << s.avg_score << std::setw(8) << s.wins << std::setw(10)
        << s.solved << '\n';
  }
  out.unsetf(std::ios::fixed);
}

}  // namespace pbls
