#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levyob/config.hpp"
#include "levyob/diagnostics.hpp"
#include "levyob/generator.hpp"
#include "levyob/obstacle_solver.hpp"
#include "levyob/process_sim.hpp"

namespace levyob {

// All writers emit UTF-8, '.' decimals, LF line endings, a header row for
// CSV and stable key order for JSON, so reruns are byte-identical.

std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

void write_value_csv(const std::string& path, const ValueGrid& grid,
                     const ObstacleProblemSpec& spec);

void write_boundary_csv(const std::string& path, const FreeBoundary& fb);

void write_paths_csv(const std::string& path, const PathBatch& batch);
void write_paths_sidecar(const std::string& path, const PathBatch& batch);

void write_regularity_json(const std::string& path, const RegularityReport& rep,
                           const std::vector<ModulusPoint>& moduli_x);

/// Raw (h, omega) modulus table.
void write_moduli_csv(const std::string& path,
                      const std::vector<ModulusPoint>& moduli);

/// Pointwise generator action on a sampled function: rows `x,Lu`.
void write_generator_csv(const std::string& path, const NonlocalOperator& op,
                         const SampledFunction& u);

void write_model_json(const std::string& path, const LevyModel& model, double rate);

void write_run_json(const std::string& path, const ExperimentConfig& cfg,
                    const std::vector<std::string>& artifact_names);

/// FNV-1a of the canonical config text; recorded in run.json.
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace levyob
