#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace cbench::clip {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles. Weights are applied on the right
/// (rows are samples/tokens, columns are features).
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
    double operator()(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
    double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const {
        return data.data() + static_cast<std::size_t>(r) * cols;
    }
    std::size_t size() const { return data.size(); }
    void zero() { std::fill(data.begin(), data.end(), 0.0); }
};

// out = a * b, out += a * b
void matmul(const Mat& a, const Mat& b, Mat& out);
void matmul_accum(const Mat& a, const Mat& b, Mat& out);
// out = a * b^T, out += a * b^T
void matmul_nt(const Mat& a, const Mat& b, Mat& out);
void matmul_nt_accum(const Mat& a, const Mat& b, Mat& out);
// out += a^T * b
void matmul_tn_accum(const Mat& a, const Mat& b, Mat& out);

void add_row_bias(Mat& m, const Vec& bias);

/// Row-wise layer normalization. Caches the normalized rows and inverse
/// standard deviations needed by the backward pass.
struct LayerNormTrace {
    Mat normalized;   // x_hat
    Vec inv_std;      // per row
};

void layernorm(const Mat& x, const Vec& gamma, const Vec& beta, Mat& out,
               LayerNormTrace* trace);
/// d_x += backward of layernorm given d_out.
void layernorm_backward(const Mat& d_out, const LayerNormTrace& trace,
                        const Vec& gamma, Mat& d_x);

double gelu(double x);
double gelu_derivative(double x);

/// Row-wise softmax in place.
void softmax_rows(Mat& m);

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> v);

} // namespace cbench::clip
