#include "sbethe/report.hpp"

#include <cmath>
#include <fstream>

namespace sbethe {

namespace {

int report_digits(int digits, mpfr_prec_t bits) {
  if (digits > 0) return digits;
  return static_cast<int>(bits * 0.30102999566398) + 2;
}

}  // namespace

json complex_to_json(const Complex& z, int digits) {
  int d = report_digits(digits, z.prec());
  return json::array({z.re().to_string(d), z.im().to_string(d)});
}

Complex complex_from_json(const json& j, const PrecisionContext& ctx) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("complex_from_json: expected [re, im] strings");
  return Complex(Real(ctx, j[0].get<std::string>()), Real(ctx, j[1].get<std::string>()));
}

json poly_to_json(const Polynomial& p, int digits) {
  json arr = json::array();
  for (const auto& c : p.coeffs()) arr.push_back(complex_to_json(c, digits));
  return arr;
}

Polynomial poly_from_json(const json& j, const PrecisionContext& ctx) {
  if (!j.is_array()) throw std::invalid_argument("poly_from_json: expected an array");
  std::vector<Complex> c;
  for (const auto& e : j) c.push_back(complex_from_json(e, ctx));
  return Polynomial(ctx.bits(), std::move(c));
}

json configuration_to_json(const Configuration& cfg, int digits) {
  json pts = json::array();
  for (const auto& z : cfg.points) pts.push_back(complex_to_json(z, digits));
  return json{{"n", cfg.n},
              {"points", pts},
              {"residual_norm", cfg.residual_norm.to_string(8)},
              {"converged", cfg.converged},
              {"iterations", cfg.iterations}};
}

std::string points_to_csv(const std::vector<Complex>& pts, int digits) {
  std::string out = "re,im\n";
  for (const auto& z : pts) {
    int d = report_digits(digits, z.prec());
    out += z.re().to_string(d) + "," + z.im().to_string(d) + "\n";
  }
  return out;
}

std::string moments_to_csv(const std::vector<Complex>& mu, int digits) {
  std::string out = "k,re,im\n";
  for (size_t k = 0; k < mu.size(); ++k) {
    int d = report_digits(digits, mu[k].prec());
    out += std::to_string(k) + "," + mu[k].re().to_string(d) + "," + mu[k].im().to_string(d) + "\n";
  }
  return out;
}

std::string points_to_svg(const std::vector<Complex>& pts) {
  double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
  for (const auto& z : pts) {
    xmin = std::min(xmin, z.re().to_double());
    xmax = std::max(xmax, z.re().to_double());
    ymin = std::min(ymin, z.im().to_double());
    ymax = std::max(ymax, z.im().to_double());
  }
  double pad = 0.1 * std::max(xmax - xmin, ymax - ymin);
  xmin -= pad; xmax += pad; ymin -= pad; ymax += pad;
  const double W = 640, H = 640;
  auto X = [&](double x) { return (x - xmin) / (xmax - xmin) * W; };
  auto Y = [&](double y) { return H - (y - ymin) / (ymax - ymin) * H; };
  char buf[256];
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\">\n";
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#888\"/>\n",
                X(xmin), Y(0.0), X(xmax), Y(0.0));
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#888\"/>\n",
                X(0.0), Y(ymin), X(0.0), Y(ymax));
  svg += buf;
  for (const auto& z : pts) {
    std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"#1f4e9c\"/>\n",
                  X(z.re().to_double()), Y(z.im().to_double()));
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

json degeneracy_report_to_json(const DegeneracyReport& rep) {
  json j;
  j["n"] = rep.n;
  j["ell"] = rep.ell;
  json res = json::array();
  for (const auto& r : rep.orth_residuals) res.push_back(r.to_string(8));
  j["orth_residuals"] = res;
  j["orth_scale"] = rep.orth_scale.to_string(8);
  auto det_json = [](const HankelDet& d) {
    return json{{"log10_abs", d.log10_abs.to_string(10)},
                {"phase", complex_to_json(d.phase, 10)},
                {"singular", d.singular}};
  };
  j["D_n0"] = det_json(rep.D_n0);
  json dlist = json::array();
  for (const auto& d : rep.D_n1) dlist.push_back(det_json(d));
  j["D_n1"] = dlist;
  j["min_eig_H_n0"] = rep.min_eig_nn.to_string(8);
  json elist = json::array();
  for (const auto& e : rep.min_eig_n1) elist.push_back(e.to_string(8));
  j["min_eig_H_n1"] = elist;
  if (rep.ode_residual) j["ode_residual"] = rep.ode_residual->to_string(8);
  if (rep.ode_deg_Q) j["ode_deg_Q"] = *rep.ode_deg_Q;
  if (rep.wronskian_spread) j["wronskian_spread"] = rep.wronskian_spread->to_string(8);
  j["passed"] = rep.passed;
  return j;
}

std::string degeneracy_report_to_csv(const DegeneracyReport& rep,
                                     const std::vector<Complex>& s_normalized) {
  std::string out = "quantity,value\n";
  out += "n," + std::to_string(rep.n) + "\n";
  for (size_t i = 0; i < s_normalized.size(); ++i) {
    out += "Re(s_" + std::to_string(i + 1) + ")," + s_normalized[i].re().to_string(12) + "\n";
    out += "Im(s_" + std::to_string(i + 1) + ")," + s_normalized[i].im().to_string(12) + "\n";
  }
  out += "min_abs_eig_H_n_0," + rep.min_eig_nn.to_string(8) + "\n";
  for (size_t k = 0; k < rep.min_eig_n1.size(); ++k)
    out += "min_abs_eig_H_n+1_" + std::to_string(k) + "," + rep.min_eig_n1[k].to_string(8) + "\n";
  if (rep.ode_residual) out += "ode_residual," + rep.ode_residual->to_string(8) + "\n";
  if (rep.wronskian_spread)
    out += "wronskian_spread," + rep.wronskian_spread->to_string(8) + "\n";
  return out;
}

json contours_to_json(const WeightedContourSet& wcs, int per_seg) {
  auto polylines = [&](const std::vector<Contour>& cs) {
    json arr = json::array();
    for (const auto& c : cs) {
      json pl = json::array();
      for (const auto& [x, y] : c.polyline(per_seg)) pl.push_back(json::array({x, y}));
      arr.push_back(pl);
    }
    return arr;
  };
  return json{{"contours", polylines(wcs.contours)}, {"duals", polylines(wcs.duals)}};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
}

}  // namespace sbethe
