#include <array>
#include <charconv>
#include <cmath>

#include "internal.hpp"
#include "translators/error.hpp"

namespace translator {

using namespace translators;

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0, kMargin = 48.0;
constexpr int kGammaSamples = 600;

std::string fixed(double v, int digits = 2) {
  if (v == 0.0) v = 0.0;
  std::array<char, 48> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, digits);
  return {buf.data(), res.ptr};
}

class Frame {
 public:
  explicit Frame(const PortraitOptions& o) : o_(o) {}
  double px(double r) const { return kMargin + r / o_.r_max * (kWidth - 2 * kMargin); }
  double py(double theta) const {
    return kMargin + (o_.theta_max - theta) / (o_.theta_max - o_.theta_min) * (kHeight - 2 * kMargin);
  }
  bool inside(double r, double theta) const {
    return r >= 0.0 && r <= o_.r_max && theta >= o_.theta_min && theta <= o_.theta_max;
  }
  const PortraitOptions& opt() const { return o_; }

 private:
  PortraitOptions o_;
};

// Splits a path into in-window runs; consecutive kept points are at least
// half a pixel apart.
class Polylines {
 public:
  Polylines(const Frame& f, std::string attrs) : f_(f), attrs_(std::move(attrs)) {}
  void add(double r, double theta) {
    if (!f_.inside(r, theta)) {
      flush();
      return;
    }
    const double x = f_.px(r), y = f_.py(theta);
    if (n_ > 0 && std::hypot(x - lx_, y - ly_) < 0.5) return;
    pts_ += (n_ ? " " : "") + fixed(x) + "," + fixed(y);
    lx_ = x;
    ly_ = y;
    ++n_;
  }
  void flush() {
    if (n_ >= 2) out_ += "    <polyline " + attrs_ + " points=\"" + pts_ + "\"/>\n";
    pts_.clear();
    n_ = 0;
  }
  std::string take() {
    flush();
    return std::move(out_);
  }

 private:
  const Frame& f_;
  std::string attrs_, pts_, out_;
  int n_ = 0;
  double lx_ = 0.0, ly_ = 0.0;
};

std::string line(double x1, double y1, double x2, double y2, const std::string& attrs) {
  return "    <line " + attrs + " x1=\"" + fixed(x1) + "\" y1=\"" + fixed(y1) + "\" x2=\"" + fixed(x2) + "\" y2=\"" +
         fixed(y2) + "\"/>\n";
}

std::vector<OrbitState> default_seeds(RotCase c, double lambda, const PortraitOptions& o) {
  std::vector<OrbitState> seeds = o.extra_seeds;
  for (int k = 0; k < o.seeds; ++k) {
    const double t = o.seeds > 1 ? static_cast<double>(k) / (o.seeds - 1) : 0.0;
    seeds.push_back({1e-3 * std::pow(1e4, t), 0.0, 0.0, 0.0});
  }
  for (const auto& [a, b] : gamma_domain(c, lambda)) {
    const double lo = std::max(a, o.theta_min), hi = std::min(b, o.theta_max);
    if (!(hi > lo)) continue;
    const double th = 0.5 * (lo + hi);
    if (const auto g = gamma(c, th, lambda); g && *g <= o.r_max) seeds.push_back({*g, th, 0.0, 0.0});
  }
  return seeds;
}

}  // namespace

std::string portrait_svg(RotCase c, double lambda, const StopPolicy& policy, const PortraitOptions& opt) {
  if (!(opt.r_max > 0.0) || !(opt.theta_max > opt.theta_min)) throw DomainError("portrait: empty window");
  if (opt.seeds < 0) throw DomainError("seeds: must be >= 0");
  const Frame f(opt);
  const auto domain = gamma_domain(c, lambda);
  const auto asym = gamma_asymptotes(c, lambda);

  std::string body = "  <g id=\"gamma\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\">\n";
  for (std::size_t b = 0; b < domain.size(); ++b) {
    const double lo = std::max(domain[b].first, opt.theta_min), hi = std::min(domain[b].second, opt.theta_max);
    Polylines pl(f, "class=\"gamma\" data-branch=\"" + std::to_string(b) + "\"");
    for (int k = 0; k <= kGammaSamples; ++k) {
      const double th = lo + (hi - lo) * k / kGammaSamples;
      if (const auto g = gamma(c, th, lambda)) {
        pl.add(*g, th);
      } else {
        pl.flush();
      }
    }
    body += pl.take();
  }
  body += "  </g>\n  <g id=\"asymptotes\" stroke=\"#7f8c8d\" stroke-dasharray=\"4 3\">\n";
  auto theta_guide = [&](double th) {
    if (th < opt.theta_min || th > opt.theta_max) return;
    body += line(f.px(0.0), f.py(th), f.px(opt.r_max), f.py(th),
                 "class=\"asymptote\" data-theta=\"" + format_double(th) + "\"");
  };
  for (double th : asym.vertical) theta_guide(th);
  if (asym.pole_at_zero) theta_guide(0.0);
  body += line(f.px(asym.horizontal_r), f.py(opt.theta_min), f.px(asym.horizontal_r), f.py(opt.theta_max),
               "class=\"asymptote\" data-r=\"" + format_double(asym.horizontal_r) + "\"");
  body += "  </g>\n  <g id=\"orbits\" fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"1\">\n";
  const auto seeds = default_seeds(c, lambda, opt);
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const std::string id = "data-seed=\"" + std::to_string(k) + "\"";
    try {
      const Orbit o = trace_orbit(c, seeds[k], lambda, policy);
      Polylines pl(f, "class=\"orbit\" " + id);
      for (const auto& st : o.samples) pl.add(st.r, st.theta);
      body += pl.take();
    } catch (const DomainError&) {
      body += "    <g class=\"orbit-skipped\" " + id + "/>\n";
    } catch (const NumericError&) {
      body += "    <g class=\"orbit-skipped\" " + id + "/>\n";
    }
  }
  body += "  </g>\n  <g id=\"labels\" font-family=\"sans-serif\" font-size=\"12\">\n";
  body += line(f.px(0.0), f.py(opt.theta_min), f.px(0.0), f.py(opt.theta_max), "class=\"axis\" stroke=\"#000\"");
  body += line(f.px(0.0), f.py(0.0), f.px(opt.r_max), f.py(0.0), "class=\"theta-zero\" stroke=\"#bbb\"");
  body += "    <text x=\"" + fixed(kWidth - kMargin) + "\" y=\"" + fixed(kHeight - kMargin / 3) + "\">r</text>\n";
  body += "    <text x=\"" + fixed(kMargin / 4) + "\" y=\"" + fixed(kMargin / 2) + "\">theta</text>\n";
  body += "    <text x=\"" + fixed(kMargin) + "\" y=\"" + fixed(kMargin / 2) + "\">" + std::string(to_string(c)) +
          " lambda=" + format_double(lambda) + "</text>\n";
  body += "  </g>\n";

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) + "\" height=\"" +
                    fixed(kHeight, 0) + "\" data-case=\"" + std::string(to_string(c)) + "\" data-lambda=\"" +
                    format_double(lambda) + "\" data-regions=\"" + std::to_string(domain.size() + 1) + "\">\n";
  return svg + body + "</svg>\n";
}

}  // namespace translator
