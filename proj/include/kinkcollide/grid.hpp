#ifndef KINKCOLLIDE_GRID_HPP
#define KINKCOLLIDE_GRID_HPP

// Real function sampled on a uniform spatial grid, optionally paired with
// time-derivative samples. Norms use the h-weighted discrete inner product.

#include <cstddef>
#include <functional>
#include <vector>

namespace kc {

struct GridField {
  double x_min = 0.0;
  double h = 0.0;
  std::vector<double> u;
  std::vector<double> ut;  // optional paired time derivative

  std::size_t size() const { return u.size(); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * h; }
};

GridField sample_field(double x_min, double h, std::size_t n,
                       const std::function<double(double)>& f);

double inner_h(const GridField& a, const GridField& b);  // h * sum a_i b_i
double norm_l2_h(const GridField& a);
double norm_h1_h(const GridField& a);  // forward-difference gradient part
double norm_sup(const GridField& a);

// Second x-derivative of samples whose ends approach two (generally
// different) constants: a smooth kink-shaped template absorbs the boundary
// values, the decaying remainder is differentiated spectrally, and the
// template curvature is added back analytically.
std::vector<double> second_x_derivative(const std::vector<double>& u,
                                        double x_min, double h);

}  // namespace kc

#endif
