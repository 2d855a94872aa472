#include "qswitch/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace qswitch {

namespace {

void check_bit(int v, const char* name) {
  if (v != 0 && v != 1) throw std::invalid_argument(std::string(name) + " must be 0 or 1");
}

// Tracks the spread (max - min) of a marginal across the settings it must not
// depend on.
struct Spread {
  double lo = 1e300;
  double hi = -1e300;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double width() const { return hi - lo; }
};

void record(InvariantReport& report, double violation, const std::string& label) {
  if (violation > report.max_violation) {
    report.max_violation = violation;
    report.worst = label;
  }
}

}  // namespace

Setting Setting::from_index(int index) {
  if (index < 0 || index >= kNumSettings) throw std::out_of_range("Setting index out of range");
  return {(index >> 3) & 1, (index >> 2) & 1, (index >> 1) & 1, index & 1};
}

std::string Setting::key() const {
  std::string k(4, '0');
  k[0] = static_cast<char>('0' + x1);
  k[1] = static_cast<char>('0' + x2);
  k[2] = static_cast<char>('0' + y);
  k[3] = static_cast<char>('0' + z);
  return k;
}

void Setting::validate() const {
  check_bit(x1, "x1");
  check_bit(x2, "x2");
  check_bit(y, "y");
  check_bit(z, "z");
}

Outcome Outcome::from_index(int index) {
  if (index < 0 || index >= kNumOutcomes) throw std::out_of_range("Outcome index out of range");
  return {(index >> 3) & 1, (index >> 2) & 1, (index >> 1) & 1, index & 1};
}

void Outcome::validate() const {
  check_bit(a1, "a1");
  check_bit(a2, "a2");
  check_bit(b, "b");
  check_bit(c, "c");
}

CorrelationTable CorrelationTable::uniform() {
  CorrelationTable t;
  OutcomeRow row;
  row.fill(1.0 / kNumOutcomes);
  for (int s = 0; s < kNumSettings; ++s) t.set_row(Setting::from_index(s), row);
  return t;
}

VbcBreakdown vbc_terms(const CorrelationTable& table) {
  VbcBreakdown out;
  for (int s = 0; s < kNumSettings; ++s) {
    const Setting set = Setting::from_index(s);
    for (int o = 0; o < kNumOutcomes; ++o) {
      const Outcome res = Outcome::from_index(o);
      const double p = table.at(set, res);
      if (set.y == 0) {
        if (res.b == 0 && res.a2 == set.x1) out.term1 += p / 8.0;
        if (res.b == 1 && res.a1 == set.x2) out.term2 += p / 8.0;
      }
      if (set.x1 == 0 && set.x2 == 0 && (res.b ^ res.c) == (set.y & set.z)) {
        out.term3 += p / 4.0;
      }
    }
  }
  out.total = out.term1 + out.term2 + out.term3;
  return out;
}

InvariantReport check_normalization(const CorrelationTable& table) {
  InvariantReport report;
  for (int s = 0; s < kNumSettings; ++s) {
    double sum = 0.0;
    for (int o = 0; o < kNumOutcomes; ++o) {
      const double p = table.row(s)[o];
      if (p < 0.0) record(report, -p, "negative entry at setting " + Setting::from_index(s).key());
      sum += p;
    }
    record(report, std::abs(sum - 1.0), "normalization at setting " + Setting::from_index(s).key());
  }
  return report;
}

InvariantReport check_no_signaling(const CorrelationTable& table) {
  InvariantReport report;

  // p(b | y) across (x1, x2, z).
  for (int y = 0; y < 2; ++y) {
    for (int b = 0; b < 2; ++b) {
      Spread spread;
      for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2)
          for (int z = 0; z < 2; ++z) {
            double m = 0.0;
            for (int o = 0; o < kNumOutcomes; ++o)
              if (Outcome::from_index(o).b == b) m += table.row(Setting{x1, x2, y, z})[o];
            spread.add(m);
          }
      record(report, spread.width(), "p(b|y) depends on x1,x2,z");
    }
  }

  // p(a1 a2 | x1 x2) across (y, z).
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) {
      for (int a = 0; a < 4; ++a) {
        Spread spread;
        for (int y = 0; y < 2; ++y)
          for (int z = 0; z < 2; ++z) {
            double m = 0.0;
            for (int o = 0; o < kNumOutcomes; ++o)
              if ((o >> 2) == a) m += table.row(Setting{x1, x2, y, z})[o];
            spread.add(m);
          }
        record(report, spread.width(), "p(a1a2|x1x2) depends on y,z");
      }
    }
  }

  // p(a1 a2 c | x1 x2 z) across y.
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) {
      for (int z = 0; z < 2; ++z) {
        for (int a = 0; a < 4; ++a) {
          for (int c = 0; c < 2; ++c) {
            Spread spread;
            for (int y = 0; y < 2; ++y) {
              double m = 0.0;
              for (int o = 0; o < kNumOutcomes; ++o) {
                const Outcome res = Outcome::from_index(o);
                if ((o >> 2) == a && res.c == c) m += table.row(Setting{x1, x2, y, z})[o];
              }
              spread.add(m);
            }
            record(report, spread.width(), "p(a1a2c|x1x2z) depends on y");
          }
        }
      }
    }
  }
  return report;
}

double max_abs_difference(const CorrelationTable& a, const CorrelationTable& b) {
  double worst = 0.0;
  for (int s = 0; s < kNumSettings; ++s)
    for (int o = 0; o < kNumOutcomes; ++o)
      worst = std::max(worst, std::abs(a.row(s)[o] - b.row(s)[o]));
  return worst;
}

std::string format_sig12(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double round_sig12(double value) { return std::strtod(format_sig12(value).c_str(), nullptr); }

nlohmann::json table_to_json(const CorrelationTable& table) {
  nlohmann::json j = nlohmann::json::object();
  for (int s = 0; s < kNumSettings; ++s) {
    nlohmann::json row = nlohmann::json::array();
    for (double p : table.row(s)) row.push_back(round_sig12(p));
    j[Setting::from_index(s).key()] = std::move(row);
  }
  return j;
}

CorrelationTable table_from_json(const nlohmann::json& j) {
  CorrelationTable t;
  for (int s = 0; s < kNumSettings; ++s) {
    const Setting set = Setting::from_index(s);
    if (!j.is_object() || !j.contains(set.key())) {
      throw std::invalid_argument("table_from_json: missing setting " + set.key());
    }
    const auto& row = j.at(set.key());
    if (!row.is_array() || row.size() != kNumOutcomes) {
      throw std::invalid_argument("table_from_json: setting " + set.key() + " needs 16 entries");
    }
    OutcomeRow r;
    for (int o = 0; o < kNumOutcomes; ++o) r[o] = row[o].get<double>();
    t.set_row(set, r);
  }
  return t;
}

std::string table_to_csv(const CorrelationTable& table) {
  std::ostringstream os;
  os << "x1,x2,y,z,a1,a2,b,c,p\n";
  for (int s = 0; s < kNumSettings; ++s) {
    const Setting set = Setting::from_index(s);
    for (int o = 0; o < kNumOutcomes; ++o) {
      const Outcome res = Outcome::from_index(o);
      os << set.x1 << ',' << set.x2 << ',' << set.y << ',' << set.z << ',' << res.a1 << ','
         << res.a2 << ',' << res.b << ',' << res.c << ',' << format_sig12(table.row(s)[o]) << '\n';
    }
  }
  return os.str();
}

CorrelationTable table_from_csv(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line) || line != "x1,x2,y,z,a1,a2,b,c,p") {
    throw std::invalid_argument("table_from_csv: unexpected header");
  }
  CorrelationTable t;
  int rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    int v[8];
    double p = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%d,%d,%d,%d,%d,%lf", &v[0], &v[1], &v[2], &v[3], &v[4],
                    &v[5], &v[6], &v[7], &p) != 9) {
      throw std::invalid_argument("table_from_csv: malformed row '" + line + "'");
    }
    const Setting s{v[0], v[1], v[2], v[3]};
    const Outcome o{v[4], v[5], v[6], v[7]};
    s.validate();
    o.validate();
    t.at(s, o) = p;
    ++rows;
  }
  if (rows != kNumSettings * kNumOutcomes) {
    throw std::invalid_argument("table_from_csv: expected 256 rows, got " + std::to_string(rows));
  }
  return t;
}

nlohmann::json breakdown_to_json(const VbcBreakdown& terms) {
  return {{"term1", round_sig12(terms.term1)},
          {"term2", round_sig12(terms.term2)},
          {"term3", round_sig12(terms.term3)},
          {"total", round_sig12(terms.total)}};
}

}  // namespace qswitch
