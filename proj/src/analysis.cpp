#include "emergence/analysis.hpp"

#include "emergence/errors.hpp"
#include "emergence/intervention.hpp"
#include "emergence/random.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

namespace emergence {

namespace {

std::vector<const EiRecord*> valid_records(const EiCurve& curve) {
  std::vector<const EiRecord*> out;
  for (const auto& r : curve.records) {
    if (r.valid() && std::isfinite(r.ei_mean_bits)) out.push_back(&r);
  }
  return out;
}

} // namespace

PeakResult detect_peak(const EiCurve& curve) {
  const auto recs = valid_records(curve);
  if (recs.size() < 3) throw InsufficientScales("peak detection needs at least 3 scales with estimates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const bool better = recs[i]->ei_mean_bits > recs[best]->ei_mean_bits ||
                        (recs[i]->ei_mean_bits == recs[best]->ei_mean_bits &&
                         recs[i]->block_size < recs[best]->block_size);
    if (better) best = i;
  }
  const auto [lo, hi] = std::minmax_element(recs.begin(), recs.end(), [](const EiRecord* a, const EiRecord* b) {
    return a->block_size < b->block_size;
  });
  const std::size_t b = recs[best]->block_size;
  return {b, b == (*lo)->block_size || b == (*hi)->block_size};
}

std::string to_string(CurveModel model) {
  switch (model) {
  case CurveModel::MonotoneIncreasing: return "MonotoneIncreasing";
  case CurveModel::MonotoneDecreasing: return "MonotoneDecreasing";
  case CurveModel::Unimodal: return "Unimodal";
  }
  return "unknown";
}

std::vector<double> isotonic_increasing(const std::vector<double>& y, const std::vector<double>& w) {
  struct Block {
    double value;
    double weight;
    std::size_t count;
  };
  std::vector<Block> stack;
  for (std::size_t i = 0; i < y.size(); ++i) {
    stack.push_back({y[i], w[i], 1});
    while (stack.size() > 1 && stack[stack.size() - 2].value > stack.back().value) {
      const Block top = stack.back();
      stack.pop_back();
      Block& prev = stack.back();
      const double wt = prev.weight + top.weight;
      prev.value = (prev.value * prev.weight + top.value * top.weight) / wt;
      prev.weight = wt;
      prev.count += top.count;
    }
  }
  std::vector<double> fit;
  fit.reserve(y.size());
  for (const auto& blk : stack) fit.insert(fit.end(), blk.count, blk.value);
  return fit;
}

namespace {

struct Fit {
  std::vector<double> values;
  double chi2 = 0.0;
  int params = 0;
  double aic() const { return chi2 + 2.0 * params; }
};

double chi_square(const std::vector<double>& y, const std::vector<double>& w, const std::vector<double>& fit) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += w[i] * (y[i] - fit[i]) * (y[i] - fit[i]);
  return s;
}

int count_levels(const std::vector<double>& fit) {
  if (fit.empty()) return 0;
  int levels = 1;
  // Pooled means of equal data can differ in the last bits.
  for (std::size_t i = 1; i < fit.size(); ++i) {
    if (std::abs(fit[i] - fit[i - 1]) > 1e-12 * std::max(1.0, std::abs(fit[i]))) ++levels;
  }
  return levels;
}

std::vector<double> isotonic_decreasing(const std::vector<double>& y, const std::vector<double>& w) {
  std::vector<double> ry(y.rbegin(), y.rend()), rw(w.rbegin(), w.rend());
  auto fit = isotonic_increasing(ry, rw);
  std::reverse(fit.begin(), fit.end());
  return fit;
}

enum class Shape { Increasing, Decreasing, Unimodal };

bool shape_ok(const std::vector<double>& means, Shape shape) {
  const std::size_t S = means.size();
  switch (shape) {
  case Shape::Increasing:
    for (std::size_t i = 1; i < S; ++i)
      if (means[i] < means[i - 1]) return false;
    return true;
  case Shape::Decreasing:
    for (std::size_t i = 1; i < S; ++i)
      if (means[i] > means[i - 1]) return false;
    return true;
  case Shape::Unimodal: {
    const auto top = static_cast<std::size_t>(std::max_element(means.begin(), means.end()) - means.begin());
    for (std::size_t i = 1; i <= top; ++i)
      if (means[i] < means[i - 1]) return false;
    for (std::size_t i = top + 1; i < S; ++i)
      if (means[i] > means[i - 1]) return false;
    return means.front() < means[top] && means.back() < means[top];
  }
  }
  return false;
}

// Order-restricted fit with the AIC-optimal number of levels: every split of
// the scales into contiguous segments (segment value = weighted mean) that
// satisfies the shape is scored by chi^2 + 2k. Exact for short curves.
std::optional<Fit> best_segmentation(const std::vector<double>& y, const std::vector<double>& w, Shape shape) {
  const std::size_t n = y.size();
  std::optional<Fit> best;
  std::vector<double> means;
  std::vector<std::size_t> starts;
  for (std::uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
    means.clear();
    starts.clear();
    double sw = 0.0, swy = 0.0;
    starts.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
      sw += w[i];
      swy += w[i] * y[i];
      if (i + 1 == n || (cuts >> i) & 1u) {
        means.push_back(swy / sw);
        sw = swy = 0.0;
        if (i + 1 < n) starts.push_back(i + 1);
      }
    }
    if (!shape_ok(means, shape)) continue;
    Fit f;
    f.values.resize(n);
    for (std::size_t sgm = 0; sgm < means.size(); ++sgm) {
      const std::size_t end = sgm + 1 < starts.size() ? starts[sgm + 1] : n;
      for (std::size_t i = starts[sgm]; i < end; ++i) f.values[i] = means[sgm];
    }
    f.chi2 = chi_square(y, w, f.values);
    f.params = static_cast<int>(means.size()) + (shape == Shape::Unimodal ? 1 : 0);
    if (!best || f.aic() < best->aic()) best = std::move(f);
  }
  return best;
}

constexpr std::size_t kMaxExhaustive = 12;

Fit fit_increasing(const std::vector<double>& y, const std::vector<double>& w) {
  if (y.size() <= kMaxExhaustive) return *best_segmentation(y, w, Shape::Increasing);
  Fit f;
  f.values = isotonic_increasing(y, w);
  f.chi2 = chi_square(y, w, f.values);
  f.params = count_levels(f.values);
  return f;
}

Fit fit_decreasing(const std::vector<double>& y, const std::vector<double>& w) {
  if (y.size() <= kMaxExhaustive) return *best_segmentation(y, w, Shape::Decreasing);
  Fit f;
  f.values = isotonic_decreasing(y, w);
  f.chi2 = chi_square(y, w, f.values);
  f.params = count_levels(f.values);
  return f;
}

bool interior_max(const std::vector<double>& fit) {
  const double top = *std::max_element(fit.begin(), fit.end());
  return fit.front() < top && fit.back() < top;
}

// Longer curves: increasing on [0, split], decreasing after; every such
// sequence is unimodal. Keeps the best split with a strictly interior maximum.
std::optional<Fit> fit_unimodal_isotonic(const std::vector<double>& y, const std::vector<double>& w) {
  if (y.size() <= kMaxExhaustive) return best_segmentation(y, w, Shape::Unimodal);
  std::optional<Fit> best;
  const std::size_t n = y.size();
  for (std::size_t split = 0; split + 1 < n; ++split) {
    const std::vector<double> y1(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(split + 1));
    const std::vector<double> w1(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(split + 1));
    const std::vector<double> y2(y.begin() + static_cast<std::ptrdiff_t>(split + 1), y.end());
    const std::vector<double> w2(w.begin() + static_cast<std::ptrdiff_t>(split + 1), w.end());
    Fit f;
    f.values = isotonic_increasing(y1, w1);
    const auto tail = isotonic_decreasing(y2, w2);
    f.values.insert(f.values.end(), tail.begin(), tail.end());
    if (!interior_max(f.values)) continue;
    f.chi2 = chi_square(y, w, f.values);
    f.params = count_levels(f.values) + 1;
    if (!best || f.aic() < best->aic()) best = std::move(f);
  }
  return best;
}

// Weighted least squares y ~ a x^2 + b x + c; admissible when a < 0 and the
// vertex lies strictly inside the x range.
std::optional<Fit> fit_concave_quadratic(const std::vector<double>& x, const std::vector<double>& y,
                                         const std::vector<double>& w, double* vertex) {
  std::array<std::array<double, 4>, 3> m{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::array<double, 3> phi{x[i] * x[i], x[i], 1.0};
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 3; ++c) m[r][c] += w[i] * phi[r] * phi[c];
      m[r][3] += w[i] * phi[r] * y[i];
    }
  }
  for (std::size_t col = 0; col < 3; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    std::swap(m[col], m[piv]);
    if (std::abs(m[col][col]) < 1e-300) return std::nullopt;
    for (std::size_t r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double factor = m[r][col] / m[col][col];
      for (std::size_t c = col; c < 4; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  const double a = m[0][3] / m[0][0];
  const double b = m[1][3] / m[1][1];
  const double c = m[2][3] / m[2][2];
  if (!(a < 0.0)) return std::nullopt;
  const double v = -b / (2.0 * a);
  if (!(v > x.front() && v < x.back())) return std::nullopt;
  Fit f;
  for (double xi : x) f.values.push_back(a * xi * xi + b * xi + c);
  f.chi2 = chi_square(y, w, f.values);
  f.params = 3;
  if (vertex) *vertex = v;
  return f;
}

struct UnimodalFit {
  Fit fit;
  std::string variant;
  std::size_t peak_index = 0;
};

std::size_t nearest_index(const std::vector<double>& x, double v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs(x[i] - v) < std::abs(x[best] - v)) best = i;
  }
  return best;
}

std::optional<UnimodalFit> fit_unimodal(const std::vector<double>& x, const std::vector<double>& y,
                                        const std::vector<double>& w) {
  std::optional<UnimodalFit> best;
  if (auto iso = fit_unimodal_isotonic(y, w)) {
    // Peak: largest fitted level; within a pooled plateau, the largest observation.
    const double top = *std::max_element(iso->values.begin(), iso->values.end());
    std::size_t idx = 0;
    bool found = false;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (iso->values[i] == top && (!found || y[i] > y[idx])) {
        idx = i;
        found = true;
      }
    }
    best = UnimodalFit{std::move(*iso), "isotonic", idx};
  }
  double vertex = 0.0;
  if (auto quad = fit_concave_quadratic(x, y, w, &vertex)) {
    if (!best || quad->aic() < best->fit.aic()) best = UnimodalFit{std::move(*quad), "quadratic", nearest_index(x, vertex)};
  }
  return best;
}

} // namespace

nlohmann::json ModelSelectionReport::to_json() const {
  nlohmann::json j;
  j["best_model"] = to_string(best_model);
  nlohmann::json aic = nlohmann::json::object();
  for (const auto& [model, value] : aic_per_model) aic[to_string(model)] = value;
  j["aic"] = aic;
  j["delta_aic"] = delta_aic;
  j["inconclusive"] = inconclusive;
  j["unimodal_variant"] = unimodal_variant.empty() ? nlohmann::json(nullptr) : nlohmann::json(unimodal_variant);
  j["peak_scale"] = peak_scale ? nlohmann::json(*peak_scale) : nlohmann::json(nullptr);
  if (peak_ci) {
    j["peak_ci"] = {{"lo", peak_ci->lo}, {"hi", peak_ci->hi}, {"support", peak_ci->support}};
  } else {
    j["peak_ci"] = nullptr;
  }
  j["sem_floor"] = sem_floor;
  j["floored_scales"] = floored_scales;
  j["method"] = "weighted isotonic (increasing, decreasing) vs unimodal (isotonic up-down or concave quadratic in "
                "log2 b), AIC = chi2 + 2k, parametric bootstrap for the peak interval";
  return j;
}

ModelSelectionReport select_model(const EiCurve& curve, const SelectionOptions& options) {
  auto recs = valid_records(curve);
  if (recs.size() < 4) throw InsufficientScales("model selection needs at least 4 scales with estimates");
  std::sort(recs.begin(), recs.end(), [](const EiRecord* a, const EiRecord* b) { return a->block_size < b->block_size; });

  ModelSelectionReport report;
  report.sem_floor = options.sem_floor;
  std::vector<double> x, y, sem, w;
  for (const auto* r : recs) {
    x.push_back(std::log2(static_cast<double>(r->block_size)));
    y.push_back(r->ei_mean_bits);
    double s = r->ei_sem_bits;
    if (!(s >= options.sem_floor)) {
      s = options.sem_floor;
      report.floored_scales.push_back(r->block_size);
    }
    sem.push_back(s);
    w.push_back(1.0 / (s * s));
  }

  const Fit inc = fit_increasing(y, w);
  const Fit dec = fit_decreasing(y, w);
  report.aic_per_model[CurveModel::MonotoneIncreasing] = inc.aic();
  report.aic_per_model[CurveModel::MonotoneDecreasing] = dec.aic();
  report.fitted[CurveModel::MonotoneIncreasing] = inc.values;
  report.fitted[CurveModel::MonotoneDecreasing] = dec.values;
  const auto uni = fit_unimodal(x, y, w);
  if (uni) {
    report.aic_per_model[CurveModel::Unimodal] = uni->fit.aic();
    report.fitted[CurveModel::Unimodal] = uni->fit.values;
    report.unimodal_variant = uni->variant;
  }

  // Ties resolve in enum order (increasing, decreasing, unimodal).
  std::vector<std::pair<double, CurveModel>> ranked;
  for (const auto& [model, value] : report.aic_per_model) ranked.emplace_back(value, model);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  report.best_model = ranked.front().second;
  report.delta_aic = ranked.size() > 1 ? ranked[1].first - ranked[0].first : std::numeric_limits<double>::infinity();
  report.inconclusive = report.delta_aic < 2.0;

  if (report.best_model == CurveModel::Unimodal) {
    report.peak_scale = recs[uni->peak_index]->block_size;
    if (options.bootstrap_n > 0) {
      auto stream = SeedTree(options.seed).child("bootstrap", 0).stream();
      std::vector<double> peaks;
      std::vector<double> ystar(y.size());
      for (std::size_t rep = 0; rep < options.bootstrap_n; ++rep) {
        for (std::size_t i = 0; i < y.size(); ++i) {
          // Box-Muller on two stream uniforms keeps the draw platform-independent.
          const double u1 = 1.0 - stream.uniform();
          const double u2 = stream.uniform();
          ystar[i] = y[i] + sem[i] * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        }
        if (auto f = fit_unimodal(x, ystar, w)) peaks.push_back(static_cast<double>(recs[f->peak_index]->block_size));
      }
      if (!peaks.empty()) {
        std::sort(peaks.begin(), peaks.end());
        report.peak_ci = PeakInterval{sorted_quantile(peaks, 0.025), sorted_quantile(peaks, 0.975),
                                      static_cast<double>(peaks.size()) / static_cast<double>(options.bootstrap_n)};
      }
    }
  }
  return report;
}

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line) {
  T value{};
  if constexpr (std::is_floating_point_v<T>) {
    if (field == "nan") return std::numeric_limits<T>::quiet_NaN();
  }
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ConfigError("curve CSV line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "'");
  }
  return value;
}

constexpr std::string_view kCsvHeader = "system,block_size,ei_mean_bits,ei_sem_bits,replicates,seed";

} // namespace

std::string curve_to_csv(const EiCurve& curve) {
  if (curve.records.empty()) throw ConfigError("cannot write an empty curve");
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : curve.records) {
    out += to_string(curve.system);
    out += ',' + std::to_string(r.block_size);
    out += ',' + format_number(r.ei_mean_bits);
    out += ',' + format_number(r.ei_sem_bits);
    out += ',' + std::to_string(r.replicates);
    out += ',' + std::to_string(curve.seed);
    out += '\n';
  }
  return out;
}

EiCurve curve_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || (line != kCsvHeader && line != std::string(kCsvHeader) + "\r")) {
    throw ConfigError("curve CSV must start with header: " + std::string(kCsvHeader));
  }
  EiCurve curve;
  std::size_t lineno = 1;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 6) throw ConfigError("curve CSV line " + std::to_string(lineno) + ": expected 6 fields");
    const SystemKind system = system_from_string(std::string(fields[0]));
    const auto seed = parse_number<std::uint64_t>(fields[5], lineno);
    if (first) {
      curve.system = system;
      curve.seed = seed;
      first = false;
    } else if (system != curve.system || seed != curve.seed) {
      throw ConfigError("curve CSV line " + std::to_string(lineno) + ": mixed systems or seeds");
    }
    EiRecord rec;
    rec.block_size = parse_number<std::size_t>(fields[1], lineno);
    rec.ei_mean_bits = parse_number<double>(fields[2], lineno);
    rec.ei_sem_bits = parse_number<double>(fields[3], lineno);
    rec.replicates = parse_number<std::size_t>(fields[4], lineno);
    rec.plugin_mean_bits = std::nan("");
    curve.records.push_back(rec);
  }
  if (curve.records.empty()) throw ConfigError("curve CSV has no data rows");
  return curve;
}

void emit_csv(const EiCurve& curve, const std::filesystem::path& path) {
  const std::string text = curve_to_csv(curve);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

EiCurve read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return curve_from_csv(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string curve_to_svg(const EiCurve& curve, const ModelSelectionReport* report) {
  const auto recs = valid_records(curve);
  if (recs.empty()) throw ConfigError("cannot plot a curve without estimates");

  constexpr double width = 720, height = 480, left = 70, right = 30, top = 50, bottom = 60;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymax = 0.0;
  for (const auto* r : recs) {
    const double x = std::log2(static_cast<double>(r->block_size));
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymax = std::max(ymax, r->ei_mean_bits + (std::isfinite(r->ei_sem_bits) ? r->ei_sem_bits : 0.0));
  }
  if (xmax == xmin) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  ymax = ymax > 0.0 ? ymax * 1.15 : 1.0;
  const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - right); };
  const auto py = [&](double y) { return height - bottom - y / ymax * (height - top - bottom); };

  std::ostringstream s;
  s << std::fixed << std::setprecision(2);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">Per-block effective information ("
    << to_string(curve.system) << ", seed " << curve.seed << ")</text>\n";
  // axes
  s << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << width - right << "\" y2=\"" << py(0)
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << py(0)
    << "\" stroke=\"black\"/>\n";
  for (const auto* r : recs) {
    const double x = px(std::log2(static_cast<double>(r->block_size)));
    s << "<line x1=\"" << x << "\" y1=\"" << py(0) << "\" x2=\"" << x << "\" y2=\"" << py(0) + 5
      << "\" stroke=\"black\"/><text x=\"" << x << "\" y=\"" << py(0) + 20 << "\" text-anchor=\"middle\">"
      << r->block_size << "</text>\n";
  }
  for (int k = 0; k <= 5; ++k) {
    const double v = ymax / 1.15 * k / 5.0;
    s << "<line x1=\"" << left - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << left << "\" y2=\"" << py(v)
      << "\" stroke=\"black\"/><text x=\"" << left - 8 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">"
      << std::setprecision(3) << v << std::setprecision(2) << "</text>\n";
  }
  s << "<text x=\"" << width / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">block size b (log2 scale)</text>\n";
  s << "<text x=\"18\" y=\"" << height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << height / 2
    << ")\">EI (bits), error bars +-1 s.e.m.</text>\n";

  // connecting line, error bars, points
  s << "<polyline fill=\"none\" stroke=\"#4477aa\" stroke-width=\"1.5\" points=\"";
  for (const auto* r : recs) s << px(std::log2(static_cast<double>(r->block_size))) << ',' << py(r->ei_mean_bits) << ' ';
  s << "\"/>\n";
  for (const auto* r : recs) {
    const double x = px(std::log2(static_cast<double>(r->block_size)));
    const double sem = std::isfinite(r->ei_sem_bits) ? r->ei_sem_bits : 0.0;
    s << "<line x1=\"" << x << "\" y1=\"" << py(r->ei_mean_bits - sem) << "\" x2=\"" << x << "\" y2=\""
      << py(r->ei_mean_bits + sem) << "\" stroke=\"#222\"/>\n";
    s << "<line x1=\"" << x - 5 << "\" y1=\"" << py(r->ei_mean_bits - sem) << "\" x2=\"" << x + 5 << "\" y2=\""
      << py(r->ei_mean_bits - sem) << "\" stroke=\"#222\"/>\n";
    s << "<line x1=\"" << x - 5 << "\" y1=\"" << py(r->ei_mean_bits + sem) << "\" x2=\"" << x + 5 << "\" y2=\""
      << py(r->ei_mean_bits + sem) << "\" stroke=\"#222\"/>\n";
    s << "<circle cx=\"" << x << "\" cy=\"" << py(r->ei_mean_bits) << "\" r=\"4\" fill=\"#4477aa\"/>\n";
  }

  std::optional<std::size_t> peak;
  if (report && report->peak_scale) {
    peak = report->peak_scale;
  } else if (recs.size() >= 3) {
    peak = detect_peak(curve).block_size;
  }
  if (peak) {
    for (const auto* r : recs) {
      if (r->block_size != *peak) continue;
      const double x = px(std::log2(static_cast<double>(r->block_size)));
      const double y = py(r->ei_mean_bits);
      s << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"8\" fill=\"none\" stroke=\"#cc3311\" stroke-width=\"2\"/>\n";
      s << "<text x=\"" << x << "\" y=\"" << y - 14 << "\" text-anchor=\"middle\" fill=\"#cc3311\">peak b=" << *peak
        << "</text>\n";
    }
  }
  if (report) {
    s << "<text x=\"" << width - right << "\" y=\"" << top << "\" text-anchor=\"end\">best model: "
      << to_string(report->best_model) << (report->inconclusive ? " (inconclusive)" : "") << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void emit_svg(const EiCurve& curve, const ModelSelectionReport* report, const std::filesystem::path& path) {
  const std::string text = curve_to_svg(curve, report);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

} // namespace emergence
