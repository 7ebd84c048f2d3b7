#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbench/clip/tensor.hpp"
#include "cbench/image.hpp"

namespace cbench::clip {

struct EncoderConfig {
    int image_size = 32;
    int patch_size = 4;
    int channels = 1;
    int model_dim = 64;
    int num_layers = 2;
    int num_heads = 4;
    int mlp_ratio = 2;
    int embed_dim = 32;
    int lora_rank = 16;
    double temperature = 0.07;

    int grid() const { return image_size / patch_size; }
    int num_patches() const { return grid() * grid(); }
    int tokens() const { return num_patches() + 1; }
    int head_dim() const { return model_dim / num_heads; }
    int patch_dim() const { return patch_size * patch_size * channels; }
    int mlp_dim() const { return mlp_ratio * model_dim; }

    /// Throws DataError if any divisibility or range constraint fails.
    void validate() const;
    bool operator==(const EncoderConfig&) const = default;
};

/// Additive low-rank pair attached to one frozen projection. B is zero at
/// initialization so the adapted projection equals the base exactly.
struct LoraAdapter {
    Mat a; // d x r
    Mat b; // r x d
};

struct BlockWeights {
    Vec ln1_gamma, ln1_beta;
    Mat wq, wk, wv, wo; // d x d
    Vec bq, bk, bv, bo;
    Mat w1; // d x mlp
    Vec b1;
    Mat w2; // mlp x d
    Vec b2;
    Vec ln2_gamma, ln2_beta;
    LoraAdapter lora_q, lora_k, lora_v;
};

/// Pre-norm transformer over patch tokens with a CLS readout projected to
/// the shared embedding space. Base weights are frozen; the per-layer
/// Q/K/V adapters are the only trainable state.
struct VisualEncoder {
    EncoderConfig cfg;
    Mat patch_embed; // patch_dim x d
    Vec patch_bias;
    Vec cls_token;
    Mat pos_embed; // tokens x d
    std::vector<BlockWeights> blocks;
    Vec final_gamma, final_beta;
    Mat proj; // d x embed_dim

    std::size_t lora_param_count() const;
    /// Flattens all adapter entries, per layer in (Aq,Bq,Ak,Bk,Av,Bv) order.
    std::vector<double> pack_lora() const;
    void unpack_lora(std::span<const double> flat);
    void zero_lora_b();

    /// FNV over the bytes of every frozen tensor; adapters excluded. Used by
    /// the freeze-contract checks.
    std::uint64_t base_checksum() const;
};

/// Seeded base weights plus freshly initialized adapters (A gaussian with
/// std 0.02, B zero). Base weights depend only on (cfg shape, seed), never
/// on lora_rank.
VisualEncoder init_encoder(const EncoderConfig& cfg, std::uint64_t seed);

/// Deterministic forward pass to a unit-norm embedding.
std::vector<double> encode_image(const VisualEncoder& enc, const ImageBuffer& img);

/// Forward pass with cached activations, reusable for the backward pass.
struct EncodeTrace {
    struct BlockTrace {
        Mat ln1_out; // Y
        LayerNormTrace ln1;
        Mat q, k, v;
        Mat ya_q, ya_k, ya_v;  // Y*A per adapter, reused by the backward pass
        std::vector<Mat> attn; // per head, T x T softmax rows
        Mat ln2_out; // Y2
        LayerNormTrace ln2;
        Mat mlp_pre; // before gelu
        Mat x_mid;   // input to the MLP half (X + attention)
    };
    Mat x0;
    std::vector<BlockTrace> blocks;
    Vec cls_final;        // CLS row entering the final norm
    LayerNormTrace ln_f;  // over the single CLS row
    Vec embed_raw;        // before normalization
    double embed_norm = 0.0;
    std::vector<double> embedding; // unit norm
};

EncodeTrace encode_with_trace(const VisualEncoder& enc, const ImageBuffer& img);

/// Accumulates d(loss)/d(adapters) into flat_grads (pack_lora layout) given
/// d(loss)/d(embedding). Base weights and inputs receive no gradient.
void backward_to_lora(const VisualEncoder& enc, const EncodeTrace& trace,
                      std::span<const double> d_embedding,
                      std::span<double> flat_grads);

struct ParamCensus {
    std::size_t trainable = 0;
    std::size_t total = 0;
    double percent = 0.0;
};

/// Trainable adapter entries (6*d*r per layer) against the full parameter
/// census of the configured encoder.
ParamCensus count_lora_params(const EncoderConfig& cfg);

} // namespace cbench::clip
