#include "rlam/io/checkpoint.hpp"

#include <stdexcept>

#include "rlam/io/binary.hpp"

namespace rlam::io {

namespace {
constexpr char kMagic[] = "RLAMCKPT";
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    const int v = ckpt.policy.vocab_size();
    if (v <= 0) throw std::invalid_argument("save_checkpoint: empty policy");
    if (ckpt.value.v.size() != v)
        throw std::invalid_argument("save_checkpoint: value table size mismatch");
    BinaryWriter w(path);
    w.magic(kMagic);
    w.u32(kVersion);
    w.i32(ckpt.vocab_size);
    w.i32(ckpt.synonym_pairs);
    w.i32(v);
    for (int r = 0; r < v; ++r)
        for (int c = 0; c < v; ++c) w.f64(ckpt.policy.logits(r, c));
    for (int i = 0; i < v; ++i) w.f64(ckpt.value.v[i]);
    w.close();
}

Checkpoint load_checkpoint(const std::string& path) {
    BinaryReader r(path);
    r.expect_magic(kMagic);
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw std::runtime_error("unsupported checkpoint version");
    Checkpoint ckpt;
    ckpt.vocab_size = r.i32();
    ckpt.synonym_pairs = r.i32();
    const int v = r.i32();
    if (v <= 0) throw std::runtime_error("corrupt checkpoint: bad size");
    ckpt.policy = toy::BigramPolicy(v);
    ckpt.value = toy::TabularValue(v);
    for (int row = 0; row < v; ++row)
        for (int col = 0; col < v; ++col) ckpt.policy.logits(row, col) = r.f64();
    for (int i = 0; i < v; ++i) ckpt.value.v[i] = r.f64();
    return ckpt;
}

}  // namespace rlam::io
