#pragma once

#include <filesystem>

#include "lqo/dataset.hpp"

namespace lqo {

/// Writes a dataset as a directory: dataset.txt (manifest: domain, N_p, N_q,
/// m, p, closure flag, rule kinds), rule_p.csv / rule_q.csv, axis_p.csv /
/// axis_q.csv, and one CSV per sample family. Family rows are
/// `index..., entries...` with the block entries row-major (complex values
/// as re,im pairs). Deferred families are sampled and written out.
void write_dataset(const std::filesystem::path& dir, const KernelDataset& ds);

/// Inverse of write_dataset; every value round-trips bit-exactly.
KernelDataset read_dataset(const std::filesystem::path& dir);

}  // namespace lqo
