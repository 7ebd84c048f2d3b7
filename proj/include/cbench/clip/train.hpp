#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cbench/clip/encoder.hpp"
#include "cbench/clip/prompt.hpp"
#include "cbench/manifest.hpp"

namespace cbench::clip {

struct TrainConfig {
    double learning_rate = 1e-4;
    int epochs = 20;
    int batch_size = 32;
    double percent = 10.0; // few-shot share of the train split, in (0,100]
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
    int workers = 1; // batch-internal parallelism; never changes results
};

/// Mean cross-entropy of temperature-scaled similarity scores against the
/// true labels. scores is batch x classes.
double finetune_loss(const Mat& scores, std::span<const int> labels, double tau);

/// Mean loss over the batch plus exact gradients for every adapter entry
/// (pack_lora layout). Base weights and the prompt table receive none.
double loss_gradients(const VisualEncoder& enc,
                      std::span<const ImageBuffer> images,
                      std::span<const int> labels, const PromptTable& table,
                      double tau, std::span<double> flat_grads, int workers = 1);

/// Stratified subset: per class max(1, round(percent * n_class / 100)) items
/// picked by seeded shuffle, returned in manifest order.
std::vector<ManifestItem> few_shot_sample(const DatasetManifest& manifest,
                                          double percent, std::uint64_t seed);

struct TrainResult {
    VisualEncoder encoder;
    std::vector<double> epoch_loss; // per-epoch mean over items
    std::size_t sample_count = 0;
};

/// Adam on the adapter parameters only; everything else is bitwise frozen.
/// Images and labels are the already-sampled training subset.
TrainResult train_few_shot(const VisualEncoder& enc,
                           std::span<const ImageBuffer> images,
                           std::span<const int> labels, const PromptTable& table,
                           const TrainConfig& cfg);

/// Samples the manifest, loads images from disk, then trains.
TrainResult train_few_shot(const VisualEncoder& enc, const DatasetManifest& manifest,
                           const PromptTable& table, const TrainConfig& cfg);

/// Argmax of similarity scores; ties break toward the lowest label id.
int zero_shot_predict(const VisualEncoder& enc, const ImageBuffer& img,
                      const PromptTable& table);

} // namespace cbench::clip
