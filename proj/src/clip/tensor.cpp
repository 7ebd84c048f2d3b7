#include "cbench/clip/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace cbench::clip {

void matmul(const Mat& a, const Mat& b, Mat& out) {
    assert(a.cols == b.rows);
    if (out.rows != a.rows || out.cols != b.cols) out = Mat(a.rows, b.cols);
    else out.zero();
    matmul_accum(a, b, out);
}

void matmul_accum(const Mat& a, const Mat& b, Mat& out) {
    assert(a.cols == b.rows && out.rows == a.rows && out.cols == b.cols);
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (int k = 0; k < a.cols; ++k) {
            double av = arow[k];
            const double* brow = b.row(k);
            for (int j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
    }
}

void matmul_nt(const Mat& a, const Mat& b, Mat& out) {
    assert(a.cols == b.cols);
    if (out.rows != a.rows || out.cols != b.rows) out = Mat(a.rows, b.rows);
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (int j = 0; j < b.rows; ++j) {
            const double* brow = b.row(j);
            double s = 0.0;
            for (int k = 0; k < a.cols; ++k) s += arow[k] * brow[k];
            orow[j] = s;
        }
    }
}

void matmul_nt_accum(const Mat& a, const Mat& b, Mat& out) {
    assert(a.cols == b.cols && out.rows == a.rows && out.cols == b.rows);
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (int j = 0; j < b.rows; ++j) {
            const double* brow = b.row(j);
            double s = 0.0;
            for (int k = 0; k < a.cols; ++k) s += arow[k] * brow[k];
            orow[j] += s;
        }
    }
}

void matmul_tn_accum(const Mat& a, const Mat& b, Mat& out) {
    assert(a.rows == b.rows && out.rows == a.cols && out.cols == b.cols);
    for (int k = 0; k < a.rows; ++k) {
        const double* arow = a.row(k);
        const double* brow = b.row(k);
        for (int i = 0; i < a.cols; ++i) {
            double av = arow[i];
            double* orow = out.row(i);
            for (int j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
    }
}

void add_row_bias(Mat& m, const Vec& bias) {
    assert(static_cast<std::size_t>(m.cols) == bias.size());
    for (int i = 0; i < m.rows; ++i) {
        double* row = m.row(i);
        for (int j = 0; j < m.cols; ++j) row[j] += bias[j];
    }
}

void layernorm(const Mat& x, const Vec& gamma, const Vec& beta, Mat& out,
               LayerNormTrace* trace) {
    constexpr double kEps = 1e-5;
    int n = x.cols;
    if (out.rows != x.rows || out.cols != n) out = Mat(x.rows, n);
    if (trace) {
        trace->normalized = Mat(x.rows, n);
        trace->inv_std.assign(x.rows, 0.0);
    }
    for (int i = 0; i < x.rows; ++i) {
        const double* row = x.row(i);
        double mean = 0.0;
        for (int j = 0; j < n; ++j) mean += row[j];
        mean /= n;
        double var = 0.0;
        for (int j = 0; j < n; ++j) {
            double d = row[j] - mean;
            var += d * d;
        }
        var /= n;
        double inv_std = 1.0 / std::sqrt(var + kEps);
        double* orow = out.row(i);
        for (int j = 0; j < n; ++j) {
            double hat = (row[j] - mean) * inv_std;
            orow[j] = gamma[j] * hat + beta[j];
            if (trace) trace->normalized(i, j) = hat;
        }
        if (trace) trace->inv_std[i] = inv_std;
    }
}

void layernorm_backward(const Mat& d_out, const LayerNormTrace& trace,
                        const Vec& gamma, Mat& d_x) {
    int n = d_out.cols;
    assert(d_x.rows == d_out.rows && d_x.cols == n);
    for (int i = 0; i < d_out.rows; ++i) {
        const double* drow = d_out.row(i);
        const double* hat = trace.normalized.row(i);
        double inv_std = trace.inv_std[i];
        double sum_dg = 0.0, sum_dg_hat = 0.0;
        for (int j = 0; j < n; ++j) {
            double dg = drow[j] * gamma[j];
            sum_dg += dg;
            sum_dg_hat += dg * hat[j];
        }
        double mean_dg = sum_dg / n;
        double mean_dg_hat = sum_dg_hat / n;
        double* dxrow = d_x.row(i);
        for (int j = 0; j < n; ++j) {
            double dg = drow[j] * gamma[j];
            dxrow[j] += inv_std * (dg - mean_dg - hat[j] * mean_dg_hat);
        }
    }
}

double gelu(double x) {
    return 0.5 * x * (1.0 + std::erf(x * 0.70710678118654752440));
}

double gelu_derivative(double x) {
    constexpr double kInvSqrt2Pi = 0.39894228040143267794;
    return 0.5 * (1.0 + std::erf(x * 0.70710678118654752440)) +
           x * kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

void softmax_rows(Mat& m) {
    for (int i = 0; i < m.rows; ++i) {
        double* row = m.row(i);
        double mx = row[0];
        for (int j = 1; j < m.cols; ++j) mx = std::max(mx, row[j]);
        // exp pass kept free of the reduction so it vectorizes
        for (int j = 0; j < m.cols; ++j) row[j] = std::exp(row[j] - mx);
        double sum = 0.0;
        for (int j = 0; j < m.cols; ++j) sum += row[j];
        double inv = 1.0 / sum;
        for (int j = 0; j < m.cols; ++j) row[j] *= inv;
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double l2_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

} // namespace cbench::clip
