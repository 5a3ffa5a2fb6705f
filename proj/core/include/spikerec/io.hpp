#pragma once

#include <string>

#include "spikerec/pipeline.hpp"

namespace spikerec::io {

// Structured-text (JSON) records. Complex numbers are [re, im] pairs; doubles
// round-trip exactly (shortest decimal that reparses to the same bits).

std::string to_json(const SpikeSignal& signal);
std::string to_json(const RegularGraph& graph);
std::string to_json(const ExperimentConfig& config);
std::string to_json(const MeasurementSetup& setup, const ExperimentConfig& config);
std::string to_json(const RecoveryOutput& output);

SpikeSignal signal_from_json(const std::string& text);
RegularGraph graph_from_json(const std::string& text);
ExperimentConfig config_from_json(const std::string& text);

struct MeasurementBundle {
  ExperimentConfig config;
  MeasurementSetup setup;
};
MeasurementBundle measurement_from_json(const std::string& text);

RecoveryOutput recovery_from_json(const std::string& text);

/// A bare signal record, or any record carrying one under a "signal" key
/// (recovery output, for instance).
SpikeSignal any_signal_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace spikerec::io
