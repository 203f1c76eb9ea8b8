#pragma once

// Minimal dense square matrix, just enough for quadratic-form integrands and
// exponent Hessians.  Not a linear-algebra library on purpose.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace varsob {

struct DenseMatrix {
    int n = 0;
    std::vector<double> a; // row-major, n*n entries

    DenseMatrix() = default;
    explicit DenseMatrix(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, 0.0) {
        if (dim < 1) throw std::invalid_argument("DenseMatrix: dim must be >= 1");
    }

    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static DenseMatrix identity(int dim) {
        DenseMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }

    /// (dim > 0) scalar * identity helper, used for isotropic Hessians.
    static DenseMatrix scaled_identity(int dim, double s) {
        DenseMatrix m = identity(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = s;
        return m;
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += at(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : a) s += v * v;
        return std::sqrt(s);
    }

    bool is_symmetric(double tol = 0.0) const {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (std::abs(at(i, j) - at(j, i)) > tol) return false;
        return true;
    }

    /// x^T A x for a point given as a contiguous array of n doubles.
    double quadratic_form(const double* x) const {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += at(i, j) * x[j];
            s += x[i] * row;
        }
        return s;
    }
};

} // namespace varsob
