#include "gibbsinf/linalg.hpp"

#include <cmath>
#include <string>

#include "gibbsinf/errors.hpp"

namespace gibbsinf {

PowerResult power_iteration(int n, const std::vector<double>& m, double tol, int max_iter) {
    if (n <= 0 || m.size() != static_cast<std::size_t>(n) * n)
        throw InputError("power_iteration: bad matrix dimensions");
    std::vector<double> v(n, 1.0), w(n, 0.0);
    double lambda = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            const double* row = m.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) s += row[j] * v[j];
            w[i] = s;
        }
        // Rayleigh quotient on the current iterate
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            num += v[i] * w[i];
            den += v[i] * v[i];
        }
        const double lam = num / den;
        double vmax = 0.0;
        for (int i = 0; i < n; ++i) vmax = std::max(vmax, std::abs(w[i]));
        if (vmax <= 0.0) throw NumericError("power_iteration: iterate vanished");
        double resid = 0.0;
        for (int i = 0; i < n; ++i) {
            resid = std::max(resid, std::abs(w[i] - lam * v[i]));
            v[i] = w[i] / vmax;
        }
        const double scale = std::max(1.0, std::abs(lam));
        if (std::abs(lam - lambda) < tol * scale && resid < tol * scale * vmax) {
            lambda = lam;
            return {lambda, v, it};
        }
        lambda = lam;
    }
    throw NumericError("power_iteration: no convergence after " + std::to_string(max_iter) + " iterations");
}

std::vector<double> transpose(int n, const std::vector<double>& m) {
    std::vector<double> t(m.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j) * n + i] = m[static_cast<std::size_t>(i) * n + j];
    return t;
}

}  // namespace gibbsinf
