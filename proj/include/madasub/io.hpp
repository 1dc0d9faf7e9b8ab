#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "madasub/dataset.hpp"
#include "madasub/enumerate.hpp"
#include "madasub/parallel.hpp"
#include "madasub/sampler.hpp"

namespace madasub {

// Shortest round-trip representation of a double.
std::string format_double(double value);

// Reads a rectangular numeric CSV. `response` is a column name (with a
// header) or a 1-based column index. The covariates are centered, and so is
// a gaussian response. Parse failures (missing file, ragged row, empty or
// non-numeric cell) throw IoError; a binomial response outside {0,1} throws
// ConfigError. Zero-variance covariates are kept and reported in `warnings`.
Dataset load_csv(const std::filesystem::path& path, const std::string& response, bool header,
                 Family family, std::vector<std::string>* warnings = nullptr);

// Header row of covariate names plus "y", response last.
void write_dataset(const std::filesystem::path& path, const Dataset& data);

// Trace file: '#'-prefixed key=value header, then
//   iteration,accept,model,log_kernel
// with one row per iteration. Models are hex bitstrings, least-significant
// bit = variable 1. Proposed models are not stored.
void write_trace(const std::filesystem::path& path, const ChainTrace& trace, double epsilon);
ChainTrace read_trace(const std::filesystem::path& path);

// Checkpoint file for round m: the same header style, then
//   variable,total_count,rbar_1,...,rbar_K
void write_checkpoint(const std::filesystem::path& path, const RoundCheckpoint& checkpoint,
                      std::size_t iterations_per_round);
RoundCheckpoint read_checkpoint(const std::filesystem::path& path);

// index,name,pip,proposal. `proposal` may be empty (written as blank cells).
void write_pips(const std::filesystem::path& path, const std::vector<std::string>& names,
                const std::vector<double>& pips, const std::vector<double>& proposal);

// mask-free listing of an exact posterior: model,size,probability
void write_model_table(const std::filesystem::path& path, const ExactPosterior& posterior);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Flat "key = value" document.
void write_summary(const std::filesystem::path& path, const KeyValues& entries);
KeyValues read_summary(const std::filesystem::path& path);

}  // namespace madasub
