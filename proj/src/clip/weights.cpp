#include "cbench/clip/weights.hpp"

#include <cstring>
#include <fstream>
#include <map>

#include <json.hpp>

#include "cbench/error.hpp"

namespace cbench::clip {

namespace {

constexpr char kMagic[4] = {'C', 'B', 'W', 'F'};
constexpr std::uint32_t kVersion = 1;

struct TensorRef {
    std::string name;
    Mat* mat = nullptr;
    Vec* vec = nullptr;
};

std::vector<TensorRef> tensor_refs(VisualEncoder& enc) {
    std::vector<TensorRef> refs;
    auto add_mat = [&](std::string name, Mat& m) { refs.push_back({std::move(name), &m, nullptr}); };
    auto add_vec = [&](std::string name, Vec& v) { refs.push_back({std::move(name), nullptr, &v}); };
    add_mat("patch_embed", enc.patch_embed);
    add_vec("patch_bias", enc.patch_bias);
    add_vec("cls_token", enc.cls_token);
    add_mat("pos_embed", enc.pos_embed);
    for (std::size_t l = 0; l < enc.blocks.size(); ++l) {
        auto& blk = enc.blocks[l];
        std::string p = "block" + std::to_string(l) + ".";
        add_vec(p + "ln1_gamma", blk.ln1_gamma);
        add_vec(p + "ln1_beta", blk.ln1_beta);
        add_mat(p + "wq", blk.wq);
        add_mat(p + "wk", blk.wk);
        add_mat(p + "wv", blk.wv);
        add_mat(p + "wo", blk.wo);
        add_vec(p + "bq", blk.bq);
        add_vec(p + "bk", blk.bk);
        add_vec(p + "bv", blk.bv);
        add_vec(p + "bo", blk.bo);
        add_mat(p + "w1", blk.w1);
        add_vec(p + "b1", blk.b1);
        add_mat(p + "w2", blk.w2);
        add_vec(p + "b2", blk.b2);
        add_vec(p + "ln2_gamma", blk.ln2_gamma);
        add_vec(p + "ln2_beta", blk.ln2_beta);
        add_mat(p + "lora_q.a", blk.lora_q.a);
        add_mat(p + "lora_q.b", blk.lora_q.b);
        add_mat(p + "lora_k.a", blk.lora_k.a);
        add_mat(p + "lora_k.b", blk.lora_k.b);
        add_mat(p + "lora_v.a", blk.lora_v.a);
        add_mat(p + "lora_v.b", blk.lora_v.b);
    }
    add_vec("final_gamma", enc.final_gamma);
    add_vec("final_beta", enc.final_beta);
    add_mat("proj", enc.proj);
    return refs;
}

template <typename T>
void write_pod(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

} // namespace

void save_weights(const WeightsFile& w, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write weights " + path.string());

    const auto& cfg = w.encoder.cfg;
    nlohmann::json header = {
        {"image_size", cfg.image_size},   {"patch_size", cfg.patch_size},
        {"channels", cfg.channels},       {"model_dim", cfg.model_dim},
        {"num_layers", cfg.num_layers},   {"num_heads", cfg.num_heads},
        {"mlp_ratio", cfg.mlp_ratio},     {"embed_dim", cfg.embed_dim},
        {"lora_rank", cfg.lora_rank},     {"temperature", cfg.temperature},
        {"prompt_template", w.prompt_template},
        {"prompt_seed", w.prompt_seed},
    };
    std::string header_str = header.dump();

    f.write(kMagic, 4);
    write_pod(f, kVersion);
    write_pod(f, static_cast<std::uint64_t>(header_str.size()));
    f.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));

    auto refs = tensor_refs(const_cast<VisualEncoder&>(w.encoder));
    write_pod(f, static_cast<std::uint32_t>(refs.size()));
    for (const auto& ref : refs) {
        write_pod(f, static_cast<std::uint16_t>(ref.name.size()));
        f.write(ref.name.data(), static_cast<std::streamsize>(ref.name.size()));
        std::uint32_t rows, cols;
        const double* data;
        std::size_t count;
        if (ref.mat) {
            rows = static_cast<std::uint32_t>(ref.mat->rows);
            cols = static_cast<std::uint32_t>(ref.mat->cols);
            data = ref.mat->data.data();
            count = ref.mat->data.size();
        } else {
            rows = 1;
            cols = static_cast<std::uint32_t>(ref.vec->size());
            data = ref.vec->data();
            count = ref.vec->size();
        }
        write_pod(f, rows);
        write_pod(f, cols);
        f.write(reinterpret_cast<const char*>(data),
                static_cast<std::streamsize>(count * sizeof(double)));
    }
    if (!f) throw IoError("short write to " + path.string());
}

WeightsFile load_weights(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open weights " + path.string());

    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError(path.string() + ": not a weights file");
    auto version = read_pod<std::uint32_t>(f);
    if (version != kVersion)
        throw DataError(path.string() + ": unsupported version " +
                        std::to_string(version));

    auto header_len = read_pod<std::uint64_t>(f);
    std::string header_str(header_len, '\0');
    f.read(header_str.data(), static_cast<std::streamsize>(header_len));
    if (!f) throw DataError(path.string() + ": truncated header");

    WeightsFile w;
    EncoderConfig cfg;
    try {
        auto header = nlohmann::json::parse(header_str);
        cfg.image_size = header.at("image_size").get<int>();
        cfg.patch_size = header.at("patch_size").get<int>();
        cfg.channels = header.at("channels").get<int>();
        cfg.model_dim = header.at("model_dim").get<int>();
        cfg.num_layers = header.at("num_layers").get<int>();
        cfg.num_heads = header.at("num_heads").get<int>();
        cfg.mlp_ratio = header.at("mlp_ratio").get<int>();
        cfg.embed_dim = header.at("embed_dim").get<int>();
        cfg.lora_rank = header.at("lora_rank").get<int>();
        cfg.temperature = header.at("temperature").get<double>();
        w.prompt_template = header.at("prompt_template").get<std::string>();
        w.prompt_seed = header.at("prompt_seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": bad header: " + e.what());
    }
    cfg.validate();
    w.encoder = init_encoder(cfg, 0); // shapes only; every tensor is overwritten

    auto refs = tensor_refs(w.encoder);
    std::map<std::string, TensorRef*> by_name;
    for (auto& ref : refs) by_name[ref.name] = &ref;

    auto count = read_pod<std::uint32_t>(f);
    if (count != refs.size())
        throw DataError(path.string() + ": expected " + std::to_string(refs.size()) +
                        " tensors, found " + std::to_string(count));
    for (std::uint32_t i = 0; i < count; ++i) {
        auto name_len = read_pod<std::uint16_t>(f);
        std::string name(name_len, '\0');
        f.read(name.data(), name_len);
        auto rows = read_pod<std::uint32_t>(f);
        auto cols = read_pod<std::uint32_t>(f);
        if (!f) throw DataError(path.string() + ": truncated tensor table");
        auto it = by_name.find(name);
        if (it == by_name.end())
            throw DataError(path.string() + ": unexpected tensor \"" + name + "\"");
        TensorRef* ref = it->second;
        double* data;
        std::size_t expect;
        if (ref->mat) {
            if (static_cast<int>(rows) != ref->mat->rows ||
                static_cast<int>(cols) != ref->mat->cols)
                throw DataError(path.string() + ": shape mismatch for \"" + name + "\"");
            data = ref->mat->data.data();
            expect = ref->mat->data.size();
        } else {
            if (rows != 1 || cols != ref->vec->size())
                throw DataError(path.string() + ": shape mismatch for \"" + name + "\"");
            data = ref->vec->data();
            expect = ref->vec->size();
        }
        f.read(reinterpret_cast<char*>(data),
               static_cast<std::streamsize>(expect * sizeof(double)));
        if (!f) throw DataError(path.string() + ": truncated tensor data");
    }
    return w;
}

} // namespace cbench::clip
