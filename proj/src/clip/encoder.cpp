#include "cbench/clip/encoder.hpp"

#include <cmath>
#include <cstring>

#include "cbench/error.hpp"
#include "cbench/rng.hpp"

namespace cbench::clip {

namespace {

// Base weight scales for the seeded desk-scale backbone. Attention and MLP
// output weights sit low enough that the adapters' additive updates can
// steer the CLS readout within a short training budget.
struct InitScales {
    static constexpr double patch = 0.03;
    static constexpr double cls = 0.02;
    static constexpr double pos = 0.02;
    static constexpr double attn_qk = 0.02;
    static constexpr double attn_v = 0.004;
    static constexpr double lora_a = 0.02;
    static constexpr double mlp_out = 0.01;
};

CounterRng rng_for(std::uint64_t seed, const std::string& name) {
    std::string key = std::to_string(seed) + "/" + name;
    return CounterRng(fnv1a64(key.data(), key.size()));
}

void fill_gaussian(Mat& m, std::uint64_t seed, const std::string& name, double std_dev) {
    CounterRng rng = rng_for(seed, name);
    for (std::size_t i = 0; i < m.data.size(); ++i)
        m.data[i] = std_dev * rng.normal(i);
}

void fill_gaussian(Vec& v, std::uint64_t seed, const std::string& name, double std_dev) {
    CounterRng rng = rng_for(seed, name);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std_dev * rng.normal(i);
}

void hash_bytes(std::uint64_t& h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
}

void hash_tensor(std::uint64_t& h, const Mat& m) {
    hash_bytes(h, m.data.data(), m.data.size() * sizeof(double));
}
void hash_tensor(std::uint64_t& h, const Vec& v) {
    hash_bytes(h, v.data(), v.size() * sizeof(double));
}

} // namespace

void EncoderConfig::validate() const {
    if (image_size <= 0 || patch_size <= 0 || image_size % patch_size != 0)
        throw DataError("image_size must be a positive multiple of patch_size");
    if (channels != 1 && channels != 3)
        throw DataError("channels must be 1 or 3");
    if (model_dim <= 0 || num_heads <= 0 || model_dim % num_heads != 0)
        throw DataError("model_dim must be a positive multiple of num_heads");
    if (num_layers <= 0) throw DataError("num_layers must be >= 1");
    if (mlp_ratio <= 0) throw DataError("mlp_ratio must be >= 1");
    if (embed_dim <= 0) throw DataError("embed_dim must be >= 1");
    if (lora_rank < 0 || lora_rank > model_dim)
        throw DataError("lora_rank must lie in [0, model_dim]");
    if (!(temperature > 0.0)) throw DataError("temperature must be > 0");
}

std::size_t VisualEncoder::lora_param_count() const {
    return static_cast<std::size_t>(6) * cfg.model_dim * cfg.lora_rank * cfg.num_layers;
}

std::vector<double> VisualEncoder::pack_lora() const {
    std::vector<double> flat;
    flat.reserve(lora_param_count());
    for (const auto& blk : blocks)
        for (const auto* adapter : {&blk.lora_q, &blk.lora_k, &blk.lora_v}) {
            flat.insert(flat.end(), adapter->a.data.begin(), adapter->a.data.end());
            flat.insert(flat.end(), adapter->b.data.begin(), adapter->b.data.end());
        }
    return flat;
}

void VisualEncoder::unpack_lora(std::span<const double> flat) {
    if (flat.size() != lora_param_count())
        throw DataError("adapter parameter count mismatch");
    std::size_t pos = 0;
    for (auto& blk : blocks)
        for (auto* adapter : {&blk.lora_q, &blk.lora_k, &blk.lora_v}) {
            std::copy_n(flat.begin() + pos, adapter->a.data.size(),
                        adapter->a.data.begin());
            pos += adapter->a.data.size();
            std::copy_n(flat.begin() + pos, adapter->b.data.size(),
                        adapter->b.data.begin());
            pos += adapter->b.data.size();
        }
}

void VisualEncoder::zero_lora_b() {
    for (auto& blk : blocks) {
        blk.lora_q.b.zero();
        blk.lora_k.b.zero();
        blk.lora_v.b.zero();
    }
}

std::uint64_t VisualEncoder::base_checksum() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    hash_tensor(h, patch_embed);
    hash_tensor(h, patch_bias);
    hash_tensor(h, cls_token);
    hash_tensor(h, pos_embed);
    for (const auto& blk : blocks) {
        hash_tensor(h, blk.ln1_gamma);
        hash_tensor(h, blk.ln1_beta);
        hash_tensor(h, blk.wq);
        hash_tensor(h, blk.wk);
        hash_tensor(h, blk.wv);
        hash_tensor(h, blk.wo);
        hash_tensor(h, blk.bq);
        hash_tensor(h, blk.bk);
        hash_tensor(h, blk.bv);
        hash_tensor(h, blk.bo);
        hash_tensor(h, blk.w1);
        hash_tensor(h, blk.b1);
        hash_tensor(h, blk.w2);
        hash_tensor(h, blk.b2);
        hash_tensor(h, blk.ln2_gamma);
        hash_tensor(h, blk.ln2_beta);
    }
    hash_tensor(h, final_gamma);
    hash_tensor(h, final_beta);
    hash_tensor(h, proj);
    return h;
}

VisualEncoder init_encoder(const EncoderConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    VisualEncoder enc;
    enc.cfg = cfg;
    int d = cfg.model_dim;

    enc.patch_embed = Mat(cfg.patch_dim(), d);
    fill_gaussian(enc.patch_embed, seed, "patch_embed", InitScales::patch);
    enc.patch_bias.assign(d, 0.0);
    enc.cls_token.assign(d, 0.0);
    fill_gaussian(enc.cls_token, seed, "cls_token", InitScales::cls);
    enc.pos_embed = Mat(cfg.tokens(), d);
    fill_gaussian(enc.pos_embed, seed, "pos_embed", InitScales::pos);

    double mlp_in_std = 1.0 / std::sqrt(static_cast<double>(d));
    enc.blocks.resize(cfg.num_layers);
    for (int l = 0; l < cfg.num_layers; ++l) {
        auto& blk = enc.blocks[l];
        std::string prefix = "block" + std::to_string(l) + ".";
        blk.ln1_gamma.assign(d, 1.0);
        blk.ln1_beta.assign(d, 0.0);
        blk.ln2_gamma.assign(d, 1.0);
        blk.ln2_beta.assign(d, 0.0);
        blk.wq = Mat(d, d);
        blk.wk = Mat(d, d);
        blk.wv = Mat(d, d);
        blk.wo = Mat(d, d);
        fill_gaussian(blk.wq, seed, prefix + "wq", InitScales::attn_qk);
        fill_gaussian(blk.wk, seed, prefix + "wk", InitScales::attn_qk);
        fill_gaussian(blk.wv, seed, prefix + "wv", InitScales::attn_v);
        fill_gaussian(blk.wo, seed, prefix + "wo", mlp_in_std);
        blk.bq.assign(d, 0.0);
        blk.bk.assign(d, 0.0);
        blk.bv.assign(d, 0.0);
        blk.bo.assign(d, 0.0);
        blk.w1 = Mat(d, cfg.mlp_dim());
        blk.w2 = Mat(cfg.mlp_dim(), d);
        fill_gaussian(blk.w1, seed, prefix + "w1", mlp_in_std);
        fill_gaussian(blk.w2, seed, prefix + "w2", InitScales::mlp_out);
        blk.b1.assign(cfg.mlp_dim(), 0.0);
        blk.b2.assign(d, 0.0);

        int r = cfg.lora_rank;
        for (auto [adapter, name] : {std::pair{&blk.lora_q, "lora_q"},
                                     std::pair{&blk.lora_k, "lora_k"},
                                     std::pair{&blk.lora_v, "lora_v"}}) {
            adapter->a = Mat(d, r);
            adapter->b = Mat(r, d);
            fill_gaussian(adapter->a, seed, prefix + name + ".a", InitScales::lora_a);
            // b stays zero: adapted projections equal the base at init
        }
    }
    enc.final_gamma.assign(d, 1.0);
    enc.final_beta.assign(d, 0.0);
    enc.proj = Mat(d, cfg.embed_dim);
    fill_gaussian(enc.proj, seed, "proj", mlp_in_std);
    return enc;
}

namespace {

Mat patchify(const EncoderConfig& cfg, const ImageBuffer& img) {
    Mat patches(cfg.num_patches(), cfg.patch_dim());
    int g = cfg.grid(), p = cfg.patch_size;
    for (int gy = 0; gy < g; ++gy)
        for (int gx = 0; gx < g; ++gx) {
            double* row = patches.row(gy * g + gx);
            int i = 0;
            for (int py = 0; py < p; ++py)
                for (int px = 0; px < p; ++px)
                    for (int c = 0; c < cfg.channels; ++c)
                        row[i++] = img.at(gy * p + py, gx * p + px, c);
        }
    return patches;
}

// Q = Y * (W + A B) + bias, with Y*A cached for the backward pass.
void project_with_adapter(const Mat& y, const Mat& w, const Vec& bias,
                          const LoraAdapter& adapter, Mat& ya, Mat& out) {
    matmul(y, w, out);
    if (adapter.a.cols > 0) {
        matmul(y, adapter.a, ya);
        matmul_accum(ya, adapter.b, out);
    }
    add_row_bias(out, bias);
}

struct HeadView {
    // copies column slice [h*dh, (h+1)*dh) of src into dst (T x dh)
    static void slice(const Mat& src, int h, int dh, Mat& dst) {
        if (dst.rows != src.rows || dst.cols != dh) dst = Mat(src.rows, dh);
        for (int i = 0; i < src.rows; ++i)
            std::memcpy(dst.row(i), src.row(i) + h * dh,
                        static_cast<std::size_t>(dh) * sizeof(double));
    }
    static void accum_back(Mat& dst, int h, int dh, const Mat& src) {
        for (int i = 0; i < src.rows; ++i) {
            double* out = dst.row(i) + h * dh;
            const double* in = src.row(i);
            for (int j = 0; j < dh; ++j) out[j] += in[j];
        }
    }
};

} // namespace

EncodeTrace encode_with_trace(const VisualEncoder& enc, const ImageBuffer& img) {
    const auto& cfg = enc.cfg;
    if (img.height != cfg.image_size || img.width != cfg.image_size ||
        img.channels != cfg.channels)
        throw DataError("image shape does not match encoder configuration");

    EncodeTrace trace;
    int t_count = cfg.tokens(), d = cfg.model_dim;

    Mat patches = patchify(cfg, img);
    trace.x0 = Mat(t_count, d);
    {
        Mat embedded;
        matmul(patches, enc.patch_embed, embedded);
        for (int j = 0; j < d; ++j)
            trace.x0(0, j) = enc.cls_token[j] + enc.pos_embed(0, j);
        for (int p = 0; p < cfg.num_patches(); ++p)
            for (int j = 0; j < d; ++j)
                trace.x0(p + 1, j) =
                    embedded(p, j) + enc.patch_bias[j] + enc.pos_embed(p + 1, j);
    }

    Mat x = trace.x0;
    trace.blocks.resize(cfg.num_layers);
    int dh = cfg.head_dim();
    double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    for (int l = 0; l < cfg.num_layers; ++l) {
        const auto& blk = enc.blocks[l];
        auto& bt = trace.blocks[l];

        layernorm(x, blk.ln1_gamma, blk.ln1_beta, bt.ln1_out, &bt.ln1);
        project_with_adapter(bt.ln1_out, blk.wq, blk.bq, blk.lora_q, bt.ya_q, bt.q);
        project_with_adapter(bt.ln1_out, blk.wk, blk.bk, blk.lora_k, bt.ya_k, bt.k);
        project_with_adapter(bt.ln1_out, blk.wv, blk.bv, blk.lora_v, bt.ya_v, bt.v);

        Mat attn_out(t_count, d);
        bt.attn.resize(cfg.num_heads);
        Mat qh, kh, vh, scores, head_out;
        for (int h = 0; h < cfg.num_heads; ++h) {
            HeadView::slice(bt.q, h, dh, qh);
            HeadView::slice(bt.k, h, dh, kh);
            HeadView::slice(bt.v, h, dh, vh);
            matmul_nt(qh, kh, scores);
            for (double& s : scores.data) s *= scale;
            softmax_rows(scores);
            bt.attn[h] = scores;
            matmul(scores, vh, head_out);
            HeadView::accum_back(attn_out, h, dh, head_out);
        }
        Mat z;
        matmul(attn_out, blk.wo, z);
        add_row_bias(z, blk.bo);

        bt.x_mid = x;
        for (std::size_t i = 0; i < x.data.size(); ++i) bt.x_mid.data[i] += z.data[i];

        layernorm(bt.x_mid, blk.ln2_gamma, blk.ln2_beta, bt.ln2_out, &bt.ln2);
        matmul(bt.ln2_out, blk.w1, bt.mlp_pre);
        add_row_bias(bt.mlp_pre, blk.b1);
        Mat hidden = bt.mlp_pre;
        for (double& v : hidden.data) v = gelu(v);
        Mat mlp_out;
        matmul(hidden, blk.w2, mlp_out);
        add_row_bias(mlp_out, blk.b2);

        x = bt.x_mid;
        for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += mlp_out.data[i];
    }

    trace.cls_final.assign(x.row(0), x.row(0) + d);
    Mat cls_row(1, d);
    std::memcpy(cls_row.row(0), trace.cls_final.data(),
                static_cast<std::size_t>(d) * sizeof(double));
    Mat normed;
    layernorm(cls_row, enc.final_gamma, enc.final_beta, normed, &trace.ln_f);

    trace.embed_raw.assign(cfg.embed_dim, 0.0);
    for (int k = 0; k < d; ++k) {
        double v = normed(0, k);
        if (v == 0.0) continue;
        const double* prow = enc.proj.row(k);
        for (int j = 0; j < cfg.embed_dim; ++j) trace.embed_raw[j] += v * prow[j];
    }
    trace.embed_norm = l2_norm(trace.embed_raw);
    if (trace.embed_norm == 0.0)
        throw DataError("degenerate embedding with zero norm");
    trace.embedding.resize(cfg.embed_dim);
    for (int j = 0; j < cfg.embed_dim; ++j)
        trace.embedding[j] = trace.embed_raw[j] / trace.embed_norm;
    return trace;
}

// Trace-free forward pass for inference: same operation order as
// encode_with_trace, but every intermediate lives in reused local buffers.
std::vector<double> encode_image(const VisualEncoder& enc, const ImageBuffer& img) {
    const auto& cfg = enc.cfg;
    if (img.height != cfg.image_size || img.width != cfg.image_size ||
        img.channels != cfg.channels)
        throw DataError("image shape does not match encoder configuration");

    int t_count = cfg.tokens(), d = cfg.model_dim, dh = cfg.head_dim();
    double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    Mat patches = patchify(cfg, img);
    Mat x(t_count, d);
    {
        Mat embedded;
        matmul(patches, enc.patch_embed, embedded);
        for (int j = 0; j < d; ++j) x(0, j) = enc.cls_token[j] + enc.pos_embed(0, j);
        for (int p = 0; p < cfg.num_patches(); ++p)
            for (int j = 0; j < d; ++j)
                x(p + 1, j) = embedded(p, j) + enc.patch_bias[j] + enc.pos_embed(p + 1, j);
    }

    Mat y, ya, q, k, v, qh, kh, vh, scores, head_out, attn_out(t_count, d), z, y2,
        hidden, mlp_out;
    for (const auto& blk : enc.blocks) {
        layernorm(x, blk.ln1_gamma, blk.ln1_beta, y, nullptr);
        project_with_adapter(y, blk.wq, blk.bq, blk.lora_q, ya, q);
        project_with_adapter(y, blk.wk, blk.bk, blk.lora_k, ya, k);
        project_with_adapter(y, blk.wv, blk.bv, blk.lora_v, ya, v);

        attn_out.zero();
        for (int h = 0; h < cfg.num_heads; ++h) {
            HeadView::slice(q, h, dh, qh);
            HeadView::slice(k, h, dh, kh);
            HeadView::slice(v, h, dh, vh);
            matmul_nt(qh, kh, scores);
            for (double& s : scores.data) s *= scale;
            softmax_rows(scores);
            matmul(scores, vh, head_out);
            HeadView::accum_back(attn_out, h, dh, head_out);
        }
        matmul(attn_out, blk.wo, z);
        add_row_bias(z, blk.bo);
        for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += z.data[i];

        layernorm(x, blk.ln2_gamma, blk.ln2_beta, y2, nullptr);
        matmul(y2, blk.w1, hidden);
        add_row_bias(hidden, blk.b1);
        for (double& h : hidden.data) h = gelu(h);
        matmul(hidden, blk.w2, mlp_out);
        add_row_bias(mlp_out, blk.b2);
        for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += mlp_out.data[i];
    }

    Mat cls_row(1, d);
    std::memcpy(cls_row.row(0), x.row(0), static_cast<std::size_t>(d) * sizeof(double));
    Mat normed;
    layernorm(cls_row, enc.final_gamma, enc.final_beta, normed, nullptr);

    std::vector<double> embed(cfg.embed_dim, 0.0);
    for (int kk = 0; kk < d; ++kk) {
        double val = normed(0, kk);
        if (val == 0.0) continue;
        const double* prow = enc.proj.row(kk);
        for (int j = 0; j < cfg.embed_dim; ++j) embed[j] += val * prow[j];
    }
    double norm = l2_norm(embed);
    if (norm == 0.0) throw DataError("degenerate embedding with zero norm");
    for (double& val : embed) val /= norm;
    return embed;
}

void backward_to_lora(const VisualEncoder& enc, const EncodeTrace& trace,
                      std::span<const double> d_embedding,
                      std::span<double> flat_grads) {
    const auto& cfg = enc.cfg;
    if (flat_grads.size() != enc.lora_param_count())
        throw DataError("gradient buffer size mismatch");
    int t_count = cfg.tokens(), d = cfg.model_dim, dh = cfg.head_dim();
    double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    // through the normalization: d_raw = (I - f f^T) d_f / |e|
    double f_dot = dot(trace.embedding, d_embedding);
    Mat d_embed(1, cfg.embed_dim);
    for (int j = 0; j < cfg.embed_dim; ++j)
        d_embed(0, j) = (d_embedding[j] - trace.embedding[j] * f_dot) / trace.embed_norm;

    // through the projection and final norm, landing on the CLS row
    Mat d_normed;
    matmul_nt(d_embed, enc.proj, d_normed); // 1 x d
    Mat d_cls(1, d);
    layernorm_backward(d_normed, trace.ln_f, enc.final_gamma, d_cls);

    Mat dx(t_count, d);
    for (int j = 0; j < d; ++j) dx(0, j) = d_cls(0, j);

    // walk adapter gradient offsets once per layer
    std::size_t per_adapter = static_cast<std::size_t>(2) * d * cfg.lora_rank;
    Mat dq(t_count, d), dk(t_count, d), dv(t_count, d);
    Mat qh, kh, vh, d_head, d_p, d_qh, d_kh, d_vh;

    for (int l = cfg.num_layers - 1; l >= 0; --l) {
        const auto& blk = enc.blocks[l];
        const auto& bt = trace.blocks[l];

        // MLP half: dx is the gradient at the block output
        Mat d_hidden;
        matmul_nt(dx, blk.w2, d_hidden); // T x mlp
        for (std::size_t i = 0; i < d_hidden.data.size(); ++i)
            d_hidden.data[i] *= gelu_derivative(bt.mlp_pre.data[i]);
        Mat d_ln2;
        matmul_nt(d_hidden, blk.w1, d_ln2); // T x d
        layernorm_backward(d_ln2, bt.ln2, blk.ln2_gamma, dx); // residual: dx += ...

        // attention half: dx is now the gradient at x_mid
        Mat d_attn;
        matmul_nt(dx, blk.wo, d_attn); // T x d
        dq.zero();
        dk.zero();
        dv.zero();
        for (int h = 0; h < cfg.num_heads; ++h) {
            HeadView::slice(bt.q, h, dh, qh);
            HeadView::slice(bt.k, h, dh, kh);
            HeadView::slice(bt.v, h, dh, vh);
            HeadView::slice(d_attn, h, dh, d_head);

            matmul_nt(d_head, vh, d_p); // T x T
            const Mat& p = bt.attn[h];
            for (int i = 0; i < t_count; ++i) {
                const double* prow = p.row(i);
                double* dprow = d_p.row(i);
                double inner = 0.0;
                for (int j = 0; j < t_count; ++j) inner += dprow[j] * prow[j];
                for (int j = 0; j < t_count; ++j)
                    dprow[j] = prow[j] * (dprow[j] - inner); // now d_scores
            }
            if (d_qh.rows != t_count || d_qh.cols != dh) {
                d_qh = Mat(t_count, dh);
                d_kh = Mat(t_count, dh);
            }
            d_qh.zero();
            d_kh.zero();
            matmul_accum(d_p, kh, d_qh);
            matmul_tn_accum(d_p, qh, d_kh);
            for (double& v : d_qh.data) v *= scale;
            for (double& v : d_kh.data) v *= scale;
            if (d_vh.rows != t_count || d_vh.cols != dh) d_vh = Mat(t_count, dh);
            d_vh.zero();
            matmul_tn_accum(p, d_head, d_vh);

            HeadView::accum_back(dq, h, dh, d_qh);
            HeadView::accum_back(dk, h, dh, d_kh);
            HeadView::accum_back(dv, h, dh, d_vh);
        }

        // adapter gradients and the gradient reaching LN1's output
        Mat d_ln1(t_count, d);
        std::size_t base = static_cast<std::size_t>(l) * 3 * per_adapter;
        auto adapter_back = [&](const Mat& d_proj, const LoraAdapter& adapter,
                                const Mat& ya, const Mat& w, std::size_t offset) {
            // d_ln1 += d_proj * (W + A B)^T
            matmul_nt_accum(d_proj, w, d_ln1);
            if (adapter.a.cols == 0) return;
            Mat d_proj_bt;
            matmul_nt(d_proj, adapter.b, d_proj_bt); // T x r
            // dA += Y^T (d_proj B^T); dB += (Y A)^T d_proj
            std::size_t r_sz = adapter.a.data.size();
            Mat da(adapter.a.rows, adapter.a.cols);
            matmul_tn_accum(bt.ln1_out, d_proj_bt, da);
            Mat db(adapter.b.rows, adapter.b.cols);
            matmul_tn_accum(ya, d_proj, db);
            for (std::size_t i = 0; i < r_sz; ++i) flat_grads[offset + i] += da.data[i];
            for (std::size_t i = 0; i < db.data.size(); ++i)
                flat_grads[offset + r_sz + i] += db.data[i];
            // d_ln1 += (d_proj B^T) A^T
            matmul_nt_accum(d_proj_bt, adapter.a, d_ln1);
        };
        adapter_back(dq, blk.lora_q, bt.ya_q, blk.wq, base);
        adapter_back(dk, blk.lora_k, bt.ya_k, blk.wk, base + per_adapter);
        adapter_back(dv, blk.lora_v, bt.ya_v, blk.wv, base + 2 * per_adapter);

        layernorm_backward(d_ln1, bt.ln1, blk.ln1_gamma, dx); // residual: dx += ...
    }
}

ParamCensus count_lora_params(const EncoderConfig& cfg) {
    cfg.validate();
    std::size_t d = cfg.model_dim, mlp = cfg.mlp_dim();
    std::size_t trainable =
        static_cast<std::size_t>(6) * d * cfg.lora_rank * cfg.num_layers;
    std::size_t per_block = 2 * d            // ln1
                            + 3 * (d * d + d) // q, k, v
                            + (d * d + d)     // output projection
                            + (d * mlp + mlp) // mlp in
                            + (mlp * d + d)   // mlp out
                            + 2 * d;          // ln2
    std::size_t base = static_cast<std::size_t>(cfg.patch_dim()) * d + d // patch embed
                       + d                                               // cls
                       + static_cast<std::size_t>(cfg.tokens()) * d      // positions
                       + per_block * cfg.num_layers                      //
                       + 2 * d                                           // final norm
                       + d * cfg.embed_dim;                              // projection
    ParamCensus census;
    census.trainable = trainable;
    census.total = base + trainable;
    census.percent = census.total == 0
                         ? 0.0
                         : 100.0 * static_cast<double>(trainable) /
                               static_cast<double>(census.total);
    return census;
}

} // namespace cbench::clip
