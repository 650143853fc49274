#include "recbench/checkpoint_io.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "recbench/errors.hpp"
#include "recbench/version.hpp"

namespace recbench::io {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using models::NamedTensor;
using models::ScorerCheckpoint;
using models::ScorerSpec;

namespace {

ordered_json spec_to_json(const ScorerSpec& spec) {
    ordered_json j;
    j["kind"] = models::to_string(spec.kind);
    j["embed_dim"] = spec.embed_dim;
    j["hidden_dim"] = spec.hidden_dim;
    j["n_heads"] = spec.n_heads;
    j["dropout"] = spec.dropout;
    j["markov_alpha"] = spec.markov_alpha;
    return j;
}

ScorerSpec spec_from_json(const ordered_json& j) {
    ScorerSpec spec;
    spec.kind = models::scorer_kind_from_string(j.at("kind").get<std::string>());
    spec.embed_dim = j.at("embed_dim").get<int>();
    spec.hidden_dim = j.at("hidden_dim").get<int>();
    spec.n_heads = j.at("n_heads").get<int>();
    spec.dropout = j.at("dropout").get<double>();
    spec.markov_alpha = j.at("markov_alpha").get<double>();
    return spec;
}

void write_u64(std::ostream& out, uint64_t v) {
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

uint64_t read_u64(std::istream& in, const fs::path& path) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
        throw DataError(path.string() + ": truncated header");
    }
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(bytes[i]) << (8 * i);
    return v;
}

} // namespace

void write_checkpoint(const fs::path& path, const ScorerCheckpoint& ckpt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    out << kMagicCheckpoint << "\n";

    ordered_json header;
    header["spec"] = spec_to_json(ckpt.spec);
    header["catalog_size"] = ckpt.catalog_size;
    header["max_len"] = ckpt.max_len;
    header["seed"] = ckpt.seed;
    header["best_valid_hit"] = ckpt.best_valid_hit;
    header["epochs_run"] = ckpt.epochs_run;
    ordered_json tensors = ordered_json::array();
    for (const NamedTensor& t : ckpt.tensors) {
        ordered_json tj;
        tj["name"] = t.name;
        tj["rows"] = t.rows;
        tj["cols"] = t.cols;
        tj["dtype"] = t.dtype == NamedTensor::DType::f32 ? "f32" : "i32";
        tensors.push_back(tj);
    }
    header["tensors"] = tensors;

    const std::string header_str = header.dump();
    write_u64(out, header_str.size());
    out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));

    for (const NamedTensor& t : ckpt.tensors) {
        if (t.dtype == NamedTensor::DType::f32) {
            static_assert(sizeof(float) == 4);
            out.write(reinterpret_cast<const char*>(t.f32.data()),
                      static_cast<std::streamsize>(t.f32.size() * 4));
        } else {
            out.write(reinterpret_cast<const char*>(t.i32.data()),
                      static_cast<std::streamsize>(t.i32.size() * 4));
        }
    }
    if (!out) throw DataError("write failed: " + path.string());
}

ScorerCheckpoint read_checkpoint(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path.string());
    std::string magic;
    if (!std::getline(in, magic) || magic != kMagicCheckpoint) {
        throw DataError(path.string() + ": not a recbench checkpoint (bad magic line)");
    }
    const uint64_t header_len = read_u64(in, path);
    std::string header_str(header_len, '\0');
    if (!in.read(header_str.data(), static_cast<std::streamsize>(header_len))) {
        throw DataError(path.string() + ": truncated header JSON");
    }
    ordered_json header;
    try {
        header = ordered_json::parse(header_str);
    } catch (const std::exception& e) {
        throw DataError(path.string() + ": invalid header JSON: " + e.what());
    }

    ScorerCheckpoint ckpt;
    ckpt.spec = spec_from_json(header.at("spec"));
    ckpt.catalog_size = header.at("catalog_size").get<int>();
    ckpt.max_len = header.at("max_len").get<int>();
    ckpt.seed = header.at("seed").get<uint64_t>();
    ckpt.best_valid_hit = header.at("best_valid_hit").get<double>();
    ckpt.epochs_run = header.at("epochs_run").get<int>();

    for (const auto& tj : header.at("tensors")) {
        NamedTensor t;
        t.name = tj.at("name").get<std::string>();
        t.rows = tj.at("rows").get<int>();
        t.cols = tj.at("cols").get<int>();
        if (t.rows < 0 || t.cols < 0) {
            throw DataError(path.string() + ": tensor '" + t.name + "' has negative shape");
        }
        const std::string dtype = tj.at("dtype").get<std::string>();
        if (dtype == "f32") {
            t.dtype = NamedTensor::DType::f32;
            t.f32.resize(t.count());
            if (!in.read(reinterpret_cast<char*>(t.f32.data()),
                         static_cast<std::streamsize>(t.count() * 4))) {
                throw DataError(path.string() + ": truncated tensor '" + t.name + "'");
            }
        } else if (dtype == "i32") {
            t.dtype = NamedTensor::DType::i32;
            t.i32.resize(t.count());
            if (!in.read(reinterpret_cast<char*>(t.i32.data()),
                         static_cast<std::streamsize>(t.count() * 4))) {
                throw DataError(path.string() + ": truncated tensor '" + t.name + "'");
            }
        } else {
            throw DataError(path.string() + ": unknown tensor dtype '" + dtype + "'");
        }
        ckpt.tensors.push_back(std::move(t));
    }
    ckpt.validate();
    return ckpt;
}

} // namespace recbench::io
