#pragma once

#include "asymptotics.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace intnum {

// ------------------------------------------------------------------------
// Fast exact two-point correlators
//
// For n = 2 the single full cycle gives W_2 = N_{12} N_{21} / (r^2 (x_1 -
// x_2)^2) where N_{ij} is the kernel numerator, a sum of wave-component
// products whose hbar-coefficients are single monomials. The numerator
// product is assembled directly at the needed hbar order and the square
// difference is removed by exact polynomial division, so no Laurent
// truncation depth is involved and large genera stay cheap.

namespace detail {

template <typename S>
CorrelatorPoly two_point_impl(const WaveModel &model, long g) {
  const long n = 2, T = 2 * g - 2 + n;
  if (T <= 0)
    throw std::domain_error("two_point_correlator: 2g-2+n must be positive");
  KernelModelData d = KernelModelData::make(model, T);
  const long r = d.r;
  auto numer = [&](long vi, long vj) {
    HbarSeries<LaurentBlock<S>> sum;
    for (long m = 0; m < r; ++m) {
      auto term = wave_component<S>(d, r, m, vi, n, T, false) *
                  wave_component<S>(d, r, r - 1 - m, vj, n, T, true);
      sum = m == 0 ? term : sum + term;
    }
    return sum;
  };
  auto n01 = numer(0, 1), n10 = numer(1, 0);
  std::map<std::vector<int>, S> prod;
  for (long t = 0; t <= T; ++t) {
    const auto &a = n01.coeff(t), &b = n10.coeff(T - t);
    for (auto &[ea, ca] : a.terms)
      for (auto &[eb, cb] : b.terms) {
        std::vector<int> e{static_cast<int>(ea[0] + eb[0]), static_cast<int>(ea[1] + eb[1])};
        auto [it, fresh] = prod.emplace(std::move(e), ca * cb);
        if (!fresh)
          it->second = it->second + ca * cb;
      }
  }
  // exact division by (w0^{2r} - w1^{2r})^2, leading term w0^{4r}
  const std::array<std::pair<std::array<int, 2>, long>, 3> divisor = {
      {{{static_cast<int>(4 * r), 0}, 1},
       {{static_cast<int>(2 * r), static_cast<int>(2 * r)}, -2},
       {{0, static_cast<int>(4 * r)}, 1}}};
  const long floor_guard = -4 * d.drop * T - 16 * r;
  LaurentBlock<S> block(n);
  const S scale = scalar_from_rational<S>(make_rational(1, r * r));
  while (!prod.empty()) {
    auto lead = std::prev(prod.end());
    if (lead->first[0] - 4 * r < floor_guard)
      throw std::logic_error("two_point_correlator: division leaves a remainder");
    const std::vector<int> qe{static_cast<int>(lead->first[0] - 4 * r), lead->first[1]};
    const S qc = lead->second;
    block.add_term(qe, qc * scale);
    for (const auto &[de, dc] : divisor) {
      std::vector<int> e{qe[0] + de[0], qe[1] + de[1]};
      auto it = prod.find(e);
      S sub = qc * scalar_from_rational<S>(Rational(dc));
      if (it == prod.end()) {
        if (!(sub == S(0)))
          prod.emplace(std::move(e), S(0) - sub);
      } else {
        it->second = it->second - sub;
        if (it->second == S(0))
          prod.erase(it);
      }
    }
  }
  return parse_correlator_block<S>(model, g, n, block, {0, 1});
}

} // namespace detail

inline CorrelatorPoly two_point_correlator(const WaveModel &model, long g) {
  if (model.kind == WaveKind::RAiry && model.r_eff > 2)
    return detail::two_point_impl<Cyclotomic>(model, g);
  return detail::two_point_impl<Rational>(model, g);
}

// ------------------------------------------------------------------------
// CSV tables: locale-independent shortest round-trip formatting.

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const {
    std::string out;
    for (size_t c = 0; c < header.size(); ++c) {
      if (c)
        out += ',';
      out += header[c];
    }
    out += '\n';
    char buf[64];
    for (const auto &row : rows) {
      for (size_t c = 0; c < row.size(); ++c) {
        if (c)
          out += ',';
        auto res = std::to_chars(buf, buf + sizeof(buf), row[c]);
        out.append(buf, res.ptr);
      }
      out += '\n';
    }
    return out;
  }

  static CsvTable from_csv(const std::string &text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty())
        continue;
      std::vector<std::string> cells;
      size_t pos = 0;
      while (pos <= line.size()) {
        size_t next = line.find(',', pos);
        if (next == std::string::npos)
          next = line.size();
        cells.push_back(line.substr(pos, next - pos));
        pos = next + 1;
      }
      if (first) {
        t.header = cells;
        first = false;
        continue;
      }
      std::vector<double> row;
      for (const auto &cell : cells) {
        double v = 0;
        auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
          throw std::runtime_error("CsvTable: malformed number '" + cell + "'");
        row.push_back(v);
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  }

  void save(const std::string &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw std::runtime_error("CsvTable: cannot write " + path);
    out << to_csv();
  }

  static CsvTable load(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw std::runtime_error("CsvTable: cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_csv(buf.str());
  }
};

// Least-squares slope of log|value - target| against log g over the upper
// half of the rows; quantifies an O(g^s) approach rate.
inline double fit_rate(const CsvTable &table, double target, size_t col = 1) {
  if (table.rows.size() < 10)
    throw std::domain_error("fit_rate: need at least 10 rows");
  const size_t lo = table.rows.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t m = 0;
  for (size_t i = lo; i < table.rows.size(); ++i) {
    const double g = table.rows[i][0];
    const double e = std::fabs(table.rows[i][col] - target);
    if (g <= 0 || e <= 0)
      throw std::domain_error("fit_rate: degenerate data");
    const double x = std::log(g), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double det = m * sxx - sx * sx;
  if (det <= 0)
    throw std::domain_error("fit_rate: degenerate abscissa");
  return (m * sxy - sx * sy) / det;
}

// ------------------------------------------------------------------------
// Disk cache of exact intersection numbers, JSON with "num/den" values.

inline std::string model_name(const WaveModel &model) {
  switch (model.kind) {
  case WaveKind::Airy:
    return "airy";
  case WaveKind::Bessel:
    return "bessel";
  default:
    return "rairy" + std::to_string(model.r_eff);
  }
}

class DiskCache {
public:
  DiskCache() = default;

  explicit DiskCache(std::string path) : path_(std::move(path)) {
    if (path_.empty() || !std::filesystem::exists(path_))
      return;
    std::ifstream in(path_);
    nlohmann::json j;
    in >> j;
    for (auto &[key, value] : j.items())
      store_[key] = value.get<std::string>();
  }

  static std::string key(const WaveModel &model, long g, long n, const std::vector<long> &d,
                         const std::vector<long> &a) {
    std::string k = model_name(model) + "|g=" + std::to_string(g) + "|n=" + std::to_string(n) + "|d=";
    for (size_t i = 0; i < d.size(); ++i)
      k += (i ? "," : "") + std::to_string(d[i]);
    k += "|a=";
    for (size_t i = 0; i < a.size(); ++i)
      k += (i ? "," : "") + std::to_string(a[i]);
    return k;
  }

  bool get(const std::string &key, Rational &out) const {
    auto it = store_.find(key);
    if (it == store_.end())
      return false;
    out = rational_from_string(it->second);
    return true;
  }

  void put(const std::string &key, const Rational &value) {
    store_[key] = rational_to_string(value);
    dirty_ = true;
  }

  void save() {
    if (path_.empty() || !dirty_)
      return;
    nlohmann::json j(store_);
    std::ofstream out(path_, std::ios::binary);
    out << j.dump(1) << '\n';
    dirty_ = false;
  }

  size_t size() const { return store_.size(); }

private:
  std::string path_;
  std::map<std::string, std::string> store_;
  bool dirty_ = false;
};

// ------------------------------------------------------------------------
// Verification experiments.

enum class ExperimentKind { G, H, I, J, L };

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::G;
  WaveModel model = WaveModel::airy();
  long K = 0;
  long g_min = 2;
  long g_max = 20;
  long d1 = 0;          // H: the fixed small exponent of the pair (d1, dmax)
  long grid_points = 20; // L: grid resolution over (0,2]^2
  long grid_g = 10;      // L: genus of the correlator ratio
  std::string out;      // optional CSV output path
};

class ExperimentRunner {
public:
  explicit ExperimentRunner(std::string cache_path = "")
      : cache_(cache_path.empty() ? DiskCache() : DiskCache(std::move(cache_path))) {}

  AsymptoticContext &context() { return asym_; }
  DiskCache &cache() { return cache_; }

  // one-point exponent forced by the degree constraint
  static long one_point_exponent(const WaveModel &model, long g) {
    return model.kind == WaveKind::Airy ? 3 * g - 2 : g - 1;
  }

  // r-spin one-point pattern r*d + a = (r+1)(2g-1); false when no a in
  // 1..r-1 satisfies it
  static bool rspin_pattern(long r, long g, long &d, long &a) {
    const long t = (r + 1) * (2 * g - 1);
    a = (t - 1) % r + 1;
    if (a >= r)
      return false;
    d = (t - a) / r;
    return true;
  }

  Rational exact_one_point(const WaveModel &model, long g) {
    const long d = one_point_exponent(model, g);
    const auto key = DiskCache::key(model, g, 1, {d}, {});
    Rational v;
    if (cache_.get(key, v))
      return v;
    ensure_one_point_range(model, g);
    if (!cache_.get(key, v))
      throw std::logic_error("exact_one_point: cache fill failed");
    return v;
  }

  Rational exact_rspin_one_point(long r, long g) {
    long d = 0, a = 0;
    if (!rspin_pattern(r, g, d, a))
      throw std::domain_error("exact_rspin_one_point: no valid spin index at this genus");
    const WaveModel model = WaveModel::rairy(r);
    const auto key = DiskCache::key(model, g, 1, {d}, {a});
    Rational v;
    if (cache_.get(key, v))
      return v;
    ensure_rspin_one_point_range(r, g);
    if (!cache_.get(key, v))
      throw std::logic_error("exact_rspin_one_point: cache fill failed");
    return v;
  }

  // all splits d1 + d2 = degree target at genus g, keyed by d1
  std::map<long, Rational> two_point_table(const WaveModel &model, long g) {
    const long total = model.kind == WaveKind::Airy ? 3 * g - 1 : g - 1;
    std::map<long, Rational> table;
    bool complete = true;
    for (long d1 = 0; d1 <= total; ++d1) {
      Rational v;
      if (!cache_.get(DiskCache::key(model, g, 2, {d1, total - d1}, {}), v)) {
        complete = false;
        break;
      }
      table[d1] = v;
    }
    if (complete)
      return table;
    table.clear();
    const CorrelatorPoly poly = two_point_correlator(model, g);
    for (long d1 = 0; d1 <= total; ++d1) {
      const Rational v = extract_intersection(poly, {d1, total - d1});
      cache_.put(DiskCache::key(model, g, 2, {d1, total - d1}, {}), v);
      table[d1] = v;
    }
    cache_.save();
    return table;
  }

  CsvTable run(const ExperimentSpec &spec) {
    CsvTable table;
    switch (spec.kind) {
    case ExperimentKind::G:
      table = run_g(spec);
      break;
    case ExperimentKind::H:
      table = run_h(spec);
      break;
    case ExperimentKind::I:
      table = run_i(spec);
      break;
    case ExperimentKind::J:
      table = run_j(spec);
      break;
    case ExperimentKind::L:
      table = run_l(spec);
      break;
    }
    verify(spec, table);
    if (!spec.out.empty())
      table.save(spec.out);
    return table;
  }

  // built-in consistency checks; throws on violation
  static void verify(const ExperimentSpec &spec, const CsvTable &table) {
    const CsvTable reparsed = CsvTable::from_csv(table.to_csv());
    if (reparsed.header != table.header || reparsed.rows != table.rows)
      throw std::logic_error("experiment: CSV round-trip failed");
    if (spec.kind != ExperimentKind::L) {
      for (size_t i = 1; i < table.rows.size(); ++i)
        if (!(table.rows[i - 1][0] < table.rows[i][0]))
          throw std::logic_error("experiment: genus column not monotone");
    } else {
      std::map<std::pair<double, double>, double> grid;
      for (const auto &row : table.rows)
        grid[{row[0], row[1]}] = row[2];
      for (const auto &[xy, v] : grid) {
        auto it = grid.find({xy.second, xy.first});
        if (it == grid.end() || it->second != v)
          throw std::logic_error("experiment: L-grid not symmetric");
      }
    }
  }

  std::pair<CsvTable, CsvTable> rspin_sequences(long r, long K, long g_min, long g_max) {
    ExperimentSpec spec;
    spec.model = WaveModel::rairy(r);
    spec.g_min = g_min;
    spec.g_max = g_max;
    spec.kind = ExperimentKind::I;
    CsvTable i_table = run(spec);
    spec.kind = ExperimentKind::J;
    spec.K = K;
    CsvTable j_table = run(spec);
    return {std::move(i_table), std::move(j_table)};
  }

private:
  // the log of the positive leading prefactor, shared with the estimates
  long double leading_log_scale(const WaveModel &model, long g, const std::vector<long> &d,
                                const std::vector<long> &a) {
    return asym_.estimate(model, g, d, a, 0).log_scale;
  }

  static long double falling(long T, long k) {
    long double f = 1;
    for (long t = 0; t < k; ++t)
      f *= static_cast<long double>(T - 1 - t);
    return f;
  }

  // exact value normalized by the leading asymptotic prefactor
  long double normalized(const WaveModel &model, long g, const std::vector<long> &d,
                         const std::vector<long> &a, const Rational &value) {
    Rational scaled = value;
    for (size_t i = 0; i < d.size(); ++i) {
      if (model.kind == WaveKind::RAiry)
        scaled *= Rational(r_factorial(model.r_eff * d[i] + a[i], model.r_eff));
      else
        scaled *= Rational(double_factorial(2 * d[i] + 1));
    }
    if (scaled == 0)
      throw std::domain_error("experiment: vanishing intersection number");
    const long double mag = std::exp(log_abs(scaled) - leading_log_scale(model, g, d, a));
    return scaled > 0 ? mag : -mag;
  }

  long double g_value(const WaveModel &model, long g, const std::vector<long> &d, long K,
                      const Rational &exact) {
    const long n = static_cast<long>(d.size());
    const long T = 2 * g - 2 + n;
    const long double base = model.kind == WaveKind::Airy ? 2.0L / 3 : 2.0L;
    const auto p = detail::exponent_multiplicities(d);
    long double sum = 0, bk = base;
    for (long k = 1; k <= K; ++k) {
      sum += bk * static_cast<long double>(asym_.correction_coeff(model, k, n, p).get_d()) /
             falling(T, k);
      bk *= base;
    }
    return normalized(model, g, d, {}, exact) - sum;
  }

  CsvTable run_g(const ExperimentSpec &spec) {
    if (spec.model.kind == WaveKind::RAiry)
      throw std::domain_error("experiment G: use kinds I/J for the r-spin model");
    CsvTable table;
    table.header = {"g", "G"};
    exact_one_point(spec.model, spec.g_max); // fills the whole range at once
    for (long g = spec.g_min; g <= spec.g_max; ++g) {
      const long d = one_point_exponent(spec.model, g);
      if (d < 0 || 2 * g - 1 <= 0)
        throw std::domain_error("experiment G: genus out of range");
      const Rational exact = exact_one_point(spec.model, g);
      table.rows.push_back(
          {static_cast<double>(g), static_cast<double>(g_value(spec.model, g, {d}, spec.K, exact))});
    }
    return table;
  }

  CsvTable run_h(const ExperimentSpec &spec) {
    if (spec.model.kind == WaveKind::RAiry)
      throw std::domain_error("experiment H: use kinds I/J for the r-spin model");
    if (spec.K < 0)
      throw std::domain_error("experiment H: K must be nonnegative");
    CsvTable table;
    table.header = {"g", "H"};
    const long double base = spec.model.kind == WaveKind::Airy ? 2.0L / 3 : 2.0L;
    for (long g = spec.g_min; g <= spec.g_max; ++g) {
      const long total = spec.model.kind == WaveKind::Airy ? 3 * g - 1 : g - 1;
      const long d2 = total - spec.d1;
      if (d2 < 0)
        throw std::domain_error("experiment H: exponent pattern invalid at this genus");
      const Rational exact = two_point_table(spec.model, g).at(spec.d1);
      const std::vector<long> d{spec.d1, d2};
      const long T = 2 * g;
      long double h;
      if (spec.K == 0)
        h = normalized(spec.model, g, d, {}, exact);
      else
        h = falling(T, spec.K) / std::pow(base, static_cast<long double>(spec.K)) *
            (g_value(spec.model, g, d, spec.K - 1, exact) - 1.0L);
      table.rows.push_back({static_cast<double>(g), static_cast<double>(h)});
    }
    return table;
  }

  CsvTable run_i(const ExperimentSpec &spec) {
    if (spec.model.kind != WaveKind::RAiry)
      throw std::domain_error("experiment I: r-spin model required");
    const long r = spec.model.r_eff;
    CsvTable table;
    table.header = {"g", "I"};
    prefetch_rspin(r, spec.g_min, spec.g_max);
    for (long g = spec.g_min; g <= spec.g_max; ++g) {
      long d = 0, a = 0;
      if (!rspin_pattern(r, g, d, a))
        continue;
      const Rational exact = exact_rspin_one_point(r, g);
      const long double ratio = normalized(spec.model, g, {d}, {a}, exact);
      const long double sign = (g - 1 - d) % 2 == 0 ? 1.0L : -1.0L;
      table.rows.push_back({static_cast<double>(g), static_cast<double>(sign * ratio)});
    }
    return table;
  }

  CsvTable run_j(const ExperimentSpec &spec) {
    if (spec.model.kind != WaveKind::RAiry)
      throw std::domain_error("experiment J: r-spin model required");
    const long r = spec.model.r_eff;
    if (r < 4)
      throw std::domain_error("experiment J: needs a second exponential sector (r >= 4)");
    const long double pi = std::numbers::pi_v<long double>;
    auto kappa = [&](long alpha) { return (2.0L * r / (r + 1)) * std::sin(alpha * pi / r); };
    CsvTable table;
    table.header = {"g", "J"};
    prefetch_rspin(r, spec.g_min, spec.g_max);
    for (long g = spec.g_min; g <= spec.g_max; ++g) {
      long d = 0, a = 0;
      if (!rspin_pattern(r, g, d, a))
        continue;
      const long T = 2 * g - 1;
      if (spec.K > T - 2)
        continue; // the falling factorial vanishes; J is undefined here
      const Rational exact = exact_rspin_one_point(r, g);
      const long double sign = (g - 1 - d) % 2 == 0 ? 1.0L : -1.0L;
      const long double i_val = sign * normalized(spec.model, g, {d}, {a}, exact);
      long double sum = 0, bk = 1;
      for (long k = 0; k <= spec.K; ++k) {
        sum += bk * sign * detail::embed_real(asym_.rspin_correction_coeff(r, 1, k, {d}, {a})) /
               falling(T, k);
        bk *= kappa(1);
      }
      const long double j_val = std::exp(T * std::log(kappa(2) / kappa(1))) * (i_val - sum);
      table.rows.push_back({static_cast<double>(g), static_cast<double>(j_val)});
    }
    return table;
  }

  CsvTable run_l(const ExperimentSpec &spec) {
    if (spec.model.kind != WaveKind::Airy)
      throw std::domain_error("experiment L: defined for the first model's correlators");
    const long g = spec.grid_g;
    auto lower = two_point_table(spec.model, g);
    auto upper = two_point_table(spec.model, g + 1);
    auto eval = [&](const std::map<long, Rational> &tbl, long gg, long double x1, long double x2) {
      const long total = 3 * gg - 1;
      long double sum = 0;
      for (const auto &[d1, v] : tbl) {
        const long d2 = total - d1;
        const long double w =
            static_cast<long double>(double_factorial(2 * d1 + 1).get_d()) *
            static_cast<long double>(double_factorial(2 * d2 + 1).get_d()) / 4.0L *
            std::pow(x1, -(d1 + 1.5L)) * std::pow(x2, -(d2 + 1.5L));
        sum += static_cast<long double>(v.get_d()) * w;
      }
      return std::exp(-2.0L * gg * std::log(2.0L)) * sum;
    };
    CsvTable table;
    table.header = {"x1", "x2", "L"};
    const long double step = 2.0L / spec.grid_points;
    for (long i = 1; i <= spec.grid_points; ++i)
      for (long j = i; j <= spec.grid_points; ++j) {
        const long double x1 = i * step, x2 = j * step;
        const long double ratio = eval(lower, g, x1, x2) / eval(upper, g + 1, x1, x2);
        if (!(ratio > 0))
          throw std::logic_error("experiment L: correlator ratio not positive");
        const double l = static_cast<double>(2 * g * std::sqrt(ratio));
        table.rows.push_back({static_cast<double>(x1), static_cast<double>(x2), l});
        if (i != j)
          table.rows.push_back({static_cast<double>(x2), static_cast<double>(x1), l});
      }
    return table;
  }

  void prefetch_rspin(long r, long g_min, long g_max) {
    for (long g = g_max; g >= g_min; --g) {
      long d = 0, a = 0;
      if (rspin_pattern(r, g, d, a)) {
        exact_rspin_one_point(r, g); // fills the whole range at once
        return;
      }
    }
  }

  void ensure_one_point_range(const WaveModel &model, long g_max) {
    const long order = 2 * g_max;
    KernelModelData data = KernelModelData::make(model, order);
    auto series = one_point_series<Rational>(data, data.r, order);
    for (long g = 1; g <= g_max; ++g) {
      const long T = 2 * g - 1;
      const auto poly = detail::parse_correlator_block<Rational>(model, g, 1, series.coeff(T), {0});
      const long d = one_point_exponent(model, g);
      if (d < 0)
        continue;
      cache_.put(DiskCache::key(model, g, 1, {d}, {}), extract_intersection(poly, {d}));
    }
    cache_.save();
  }

  void ensure_rspin_one_point_range(long r, long g_max) {
    const WaveModel model = WaveModel::rairy(r);
    const long order = 2 * g_max;
    KernelModelData data = KernelModelData::make(model, order);
    auto series = one_point_series<Cyclotomic>(data, data.r, order);
    for (long g = 1; g <= g_max; ++g) {
      long d = 0, a = 0;
      if (!rspin_pattern(r, g, d, a))
        continue;
      const long T = 2 * g - 1;
      const auto poly =
          detail::parse_correlator_block<Cyclotomic>(model, g, 1, series.coeff(T), {0});
      cache_.put(DiskCache::key(model, g, 1, {d}, {a}), extract_intersection(poly, {d}, {a}));
    }
    cache_.save();
  }

  AsymptoticContext asym_;
  DiskCache cache_;
};

} // namespace intnum
