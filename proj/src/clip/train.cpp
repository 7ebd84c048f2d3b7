#include "cbench/clip/train.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "cbench/error.hpp"
#include "cbench/rng.hpp"

namespace cbench::clip {

double finetune_loss(const Mat& scores, std::span<const int> labels, double tau) {
    if (!(tau > 0.0)) throw DataError("temperature must be > 0");
    if (static_cast<std::size_t>(scores.rows) != labels.size())
        throw DataError("batch size mismatch between scores and labels");
    double total = 0.0;
    for (int i = 0; i < scores.rows; ++i) {
        if (labels[i] < 0 || labels[i] >= scores.cols)
            throw DataError("label " + std::to_string(labels[i]) + " out of range");
        const double* row = scores.row(i);
        double mx = row[0] / tau;
        for (int c = 1; c < scores.cols; ++c) mx = std::max(mx, row[c] / tau);
        double sum = 0.0;
        for (int c = 0; c < scores.cols; ++c) sum += std::exp(row[c] / tau - mx);
        total += mx + std::log(sum) - row[labels[i]] / tau;
    }
    return total / scores.rows;
}

double loss_gradients(const VisualEncoder& enc,
                      std::span<const ImageBuffer> images,
                      std::span<const int> labels, const PromptTable& table,
                      double tau, std::span<double> flat_grads, int workers) {
    if (images.empty() || images.size() != labels.size())
        throw DataError("empty batch or size mismatch");
    if (!(tau > 0.0)) throw DataError("temperature must be > 0");
    if (flat_grads.size() != enc.lora_param_count())
        throw DataError("gradient buffer size mismatch");
    int classes = static_cast<int>(table.num_classes());
    std::size_t batch = images.size();

    // Per-image gradients land in their own buffers and are reduced in item
    // order, so the result is independent of the worker count.
    std::vector<std::vector<double>> grads(batch);
    std::vector<double> losses(batch, 0.0);

    auto process = [&](std::size_t i) {
        grads[i].assign(flat_grads.size(), 0.0);
        EncodeTrace trace = encode_with_trace(enc, images[i]);
        std::vector<double> scores(classes);
        for (int c = 0; c < classes; ++c)
            scores[c] = dot(trace.embedding, table.vectors[c]);

        int y = labels[i];
        if (y < 0 || y >= classes)
            throw DataError("label " + std::to_string(y) + " out of range");
        double mx = scores[0] / tau;
        for (int c = 1; c < classes; ++c) mx = std::max(mx, scores[c] / tau);
        double sum = 0.0;
        std::vector<double> p(classes);
        for (int c = 0; c < classes; ++c) {
            p[c] = std::exp(scores[c] / tau - mx);
            sum += p[c];
        }
        for (double& v : p) v /= sum;
        losses[i] = std::log(sum) + mx - scores[y] / tau;

        std::vector<double> d_embedding(table.embed_dim, 0.0);
        double inv_batch = 1.0 / static_cast<double>(batch);
        for (int c = 0; c < classes; ++c) {
            double ds = (p[c] - (c == y ? 1.0 : 0.0)) / tau * inv_batch;
            if (ds == 0.0) continue;
            const auto& t_c = table.vectors[c];
            for (int j = 0; j < table.embed_dim; ++j) d_embedding[j] += ds * t_c[j];
        }
        backward_to_lora(enc, trace, d_embedding, grads[i]);
    };

    int n_workers = std::clamp(workers, 1, static_cast<int>(batch));
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < batch; ++i) process(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::string> errors(batch);
        auto run = [&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= batch) return;
                try {
                    process(i);
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < n_workers; ++t) pool.emplace_back(run);
        run();
        for (auto& t : pool) t.join();
        for (const auto& err : errors)
            if (!err.empty()) throw DataError(err);
    }

    double loss = 0.0;
    for (std::size_t i = 0; i < batch; ++i) {
        loss += losses[i];
        const auto& g = grads[i];
        for (std::size_t j = 0; j < flat_grads.size(); ++j) flat_grads[j] += g[j];
    }
    return loss / static_cast<double>(batch);
}

std::vector<ManifestItem> few_shot_sample(const DatasetManifest& manifest,
                                          double percent, std::uint64_t seed) {
    if (!(percent > 0.0 && percent <= 100.0))
        throw DataError("few-shot percent must lie in (0,100]");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < manifest.items.size(); ++i)
        by_class[manifest.items[i].label].push_back(i);
    for (std::size_t c = 0; c < manifest.class_names.size(); ++c)
        if (!by_class.count(static_cast<int>(c)))
            throw DataError("class \"" + manifest.class_names[c] +
                            "\" has no items to sample from");

    std::vector<bool> chosen(manifest.items.size(), false);
    for (auto& [label, indices] : by_class) {
        std::size_t n = indices.size();
        std::size_t k = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(percent * n / 100.0)));
        k = std::min(k, n);
        std::string key = std::to_string(seed) + "/fewshot/" + std::to_string(label);
        CounterRng rng(fnv1a64(key.data(), key.size()));
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + rng.below(i, n - i);
            std::swap(indices[i], indices[j]);
        }
        for (std::size_t i = 0; i < k; ++i) chosen[indices[i]] = true;
    }

    std::vector<ManifestItem> out;
    for (std::size_t i = 0; i < manifest.items.size(); ++i)
        if (chosen[i]) out.push_back(manifest.items[i]);
    return out;
}

TrainResult train_few_shot(const VisualEncoder& enc,
                           std::span<const ImageBuffer> images,
                           std::span<const int> labels, const PromptTable& table,
                           const TrainConfig& cfg) {
    if (images.size() != labels.size() || images.empty())
        throw DataError("training set is empty or inconsistent");
    if (cfg.batch_size <= 0) throw DataError("batch_size must be >= 1");
    if (cfg.epochs < 0) throw DataError("epochs must be >= 0");

    TrainResult result;
    result.encoder = enc;
    result.sample_count = images.size();
    if (cfg.epochs == 0) return result;

    auto& model = result.encoder;
    std::vector<double> params = model.pack_lora();
    std::vector<double> m(params.size(), 0.0), v(params.size(), 0.0);
    std::vector<double> grads(params.size());
    double tau = model.cfg.temperature;
    std::size_t n = images.size();
    long step = 0;

    std::vector<std::size_t> order(n);
    std::vector<ImageBuffer> batch_images;
    std::vector<int> batch_labels;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // fixed batch order from the seed, reshuffled per epoch
        std::string key = std::to_string(cfg.seed) + "/epoch/" + std::to_string(epoch);
        CounterRng rng(fnv1a64(key.data(), key.size()));
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            std::size_t j = i + rng.below(i, n - i);
            std::swap(order[i], order[j]);
        }

        double epoch_total = 0.0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            std::size_t count = std::min<std::size_t>(cfg.batch_size, n - start);
            batch_images.assign(count, ImageBuffer{});
            batch_labels.assign(count, 0);
            for (std::size_t i = 0; i < count; ++i) {
                batch_images[i] = images[order[start + i]];
                batch_labels[i] = labels[order[start + i]];
            }
            std::fill(grads.begin(), grads.end(), 0.0);
            double loss = loss_gradients(model, batch_images, batch_labels, table,
                                         tau, grads, cfg.workers);
            if (!std::isfinite(loss))
                throw DataError("training diverged at epoch " + std::to_string(epoch));
            epoch_total += loss * static_cast<double>(count);

            ++step;
            double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            for (std::size_t i = 0; i < params.size(); ++i) {
                m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grads[i];
                v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
                params[i] -= cfg.learning_rate * (m[i] / bc1) /
                             (std::sqrt(v[i] / bc2) + cfg.adam_eps);
            }
            model.unpack_lora(params);
        }
        result.epoch_loss.push_back(epoch_total / static_cast<double>(n));
    }
    return result;
}

TrainResult train_few_shot(const VisualEncoder& enc, const DatasetManifest& manifest,
                           const PromptTable& table, const TrainConfig& cfg) {
    auto sampled = few_shot_sample(manifest, cfg.percent, cfg.seed);
    std::vector<ImageBuffer> images;
    std::vector<int> labels;
    images.reserve(sampled.size());
    for (const auto& item : sampled) {
        images.push_back(load_image(manifest.base_dir / item.path));
        labels.push_back(item.label);
    }
    return train_few_shot(enc, images, labels, table, cfg);
}

int zero_shot_predict(const VisualEncoder& enc, const ImageBuffer& img,
                      const PromptTable& table) {
    auto scores = similarity(encode_image(enc, img), table);
    int best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c)
        if (scores[c] > scores[best]) best = static_cast<int>(c);
    return best;
}

} // namespace cbench::clip
