#pragma once

#include <string>

#include "rlam/toy/bigram_policy.hpp"

namespace rlam::io {

// Versioned on-disk snapshot of a policy, its value table, and the two
// integers that reconstruct the vocabulary it was trained over.
struct Checkpoint {
    toy::BigramPolicy policy;
    toy::TabularValue value;
    int vocab_size = 0;
    int synonym_pairs = 0;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace rlam::io
