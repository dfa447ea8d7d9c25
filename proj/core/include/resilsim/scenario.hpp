#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "resilsim/cyber.hpp"
#include "resilsim/epidemics.hpp"
#include "resilsim/health.hpp"
#include "resilsim/healthcare.hpp"

namespace resilsim {

struct Diagnostic {
    std::string path;  // config location, e.g. "hospitals[1].it_node"
    std::string message;
    bool operator==(const Diagnostic&) const = default;
};

/// Carries every located validation problem of a scenario document.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

struct MonteCarloConfig {
    int runs = 1;
    std::uint64_t master_seed = 0;
    bool operator==(const MonteCarloConfig&) const = default;
};

struct DiseaseCellConfig {
    double mean_days = 1.0;
    // Eventual-outcome proportions in "per 100 patients" units; rows are
    // normalized to sum exactly 100 at parse time.
    double recovery = 100.0;
    double worsening = 0.0;
    double death = 0.0;
    bool operator==(const DiseaseCellConfig&) const = default;
};

struct DiseaseConfig {
    std::string id;
    SirParams sir;
    // One entry per admissible (ill state, care level) pair.
    std::map<HealthState, std::map<CareLevel, DiseaseCellConfig>> states;
    bool operator==(const DiseaseConfig&) const = default;
};

struct PopulationDiseaseConfig {
    std::string disease;
    long long initial_infected = 0;
    long long initial_recovered = 0;
    bool operator==(const PopulationDiseaseConfig&) const = default;
};

struct MciConfig {
    int day = 0;
    long long count = 0;
    std::map<HealthState, double> severity;  // over ill states; normalized
    std::optional<std::string> disease;      // default: baseline disease
    bool operator==(const MciConfig&) const = default;
};

struct PopulationConfig {
    std::string id;
    long long size = 0;
    double baseline_incidence_per_100k = 0.0;
    std::optional<std::string> baseline_disease;
    std::map<HealthState, double> baseline_severity;  // default: all moderate
    std::vector<PopulationDiseaseConfig> diseases;
    std::map<std::string, double> routing;  // hospital id -> weight; normalized
    std::vector<MciConfig> mci_events;
    bool operator==(const PopulationConfig&) const = default;
};

struct ServiceConfig {
    bool enabled = true;
    std::optional<long long> capacity;  // nullopt: unbounded
    bool operator==(const ServiceConfig&) const = default;
};

struct HospitalConfig {
    std::string id;
    std::string it_node;
    std::vector<std::string> referral_partners;
    bool referral_enabled = false;
    // Absent levels are disabled services.
    std::map<CareLevel, ServiceConfig> services;
    bool operator==(const HospitalConfig&) const = default;
};

struct ItNodeConfig {
    std::string id;
    double service_capacity = 0.0;
    double vulnerability = 0.0;  // resolved from a class name or a number
    double recovery_capacity = 1.0;
    std::vector<std::string> depends_on;
    bool operator==(const ItNodeConfig&) const = default;
};

struct AttackEventConfig {
    AttackKind kind = AttackKind::ransomware;
    int start_day = 0;
    std::optional<std::string> target;  // nullopt: broadcast
    double base_outage_days = 0.0;
    int detection_delay_days = 0;
    int duration_days = 0;
    double request_load = 0.0;
    std::vector<AttackEventConfig> payload;  // botnet: at most one
    bool operator==(const AttackEventConfig&) const = default;
};

struct AttackerConfig {
    std::string id;
    double threat_level = 1.0;
    std::vector<AttackEventConfig> campaign;
    bool operator==(const AttackerConfig&) const = default;
};

struct QualityConfig {
    double saturation_slope = 0.5;
    double floor = 0.25;
    int utilization_window_days = 14;
    bool operator==(const QualityConfig&) const = default;
};

struct CyberConfig {
    std::vector<std::pair<std::string, double>> vulnerability_classes = {
        {"low", 0.1}, {"medium", 0.5}, {"high", 0.9}};
    double botnet_spread_probability = 0.1;
    double ddos_absorb_factor = 2.0;
    int recovery_ramp_days = 0;
    bool operator==(const CyberConfig&) const = default;
};

struct CountermeasureConfig {
    std::optional<double> recovery_days_override;
    bool operator==(const CountermeasureConfig&) const = default;
};

/// Complete declarative input of a simulation batch.
struct ScenarioConfig {
    int schema_version = 1;
    int horizon_days = 0;
    MonteCarloConfig monte_carlo;
    QualityConfig quality;
    CyberConfig cyber;
    CountermeasureConfig countermeasures;
    std::vector<DiseaseConfig> diseases;
    std::vector<PopulationConfig> populations;
    std::vector<HospitalConfig> hospitals;
    std::vector<ItNodeConfig> it_nodes;
    std::vector<AttackerConfig> attackers;
    // Row-stochastic cross-population mixing weights; empty means identity.
    std::map<std::string, std::map<std::string, double>> contact_matrix;
    bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates a scenario document (JSON). Collects every located
/// problem into one ConfigError.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario_file(const std::filesystem::path& path);

/// Canonical JSON form; parse(serialize(config)) == config.
std::string serialize_scenario(const ScenarioConfig& config);

/// Labels accepted by apply_countermeasure, "baseline" first.
const std::vector<std::string>& countermeasure_labels();

/// Pure overlay of one named countermeasure:
///   baseline      - identity
///   lowBeds       - general and ICU capacities x1.5, rounded up
///   highBeds      - general and ICU capacities x2
///   lowSecurity   - post-attack recovery forced to 15 days
///   highSecurity  - post-attack recovery forced to 1 day
///   mHealth       - enables the telemonitoring service at every hospital
///   referral      - enables inter-hospital referral
ScenarioConfig apply_countermeasure(const ScenarioConfig& base,
                                    std::string_view label);

struct RiskCell {
    std::string label;
    ScenarioConfig scenario;
};

/// Expands a risk-axes document against a base scenario: the cartesian
/// product of the axis options, each option applying its JSON patch
/// (RFC 6902) to the base document. Labels join the option names with '_',
/// last axis fastest.
std::vector<RiskCell> expand_risk_grid(const std::string& scenario_text,
                                       const std::string& risks_text);

}  // namespace resilsim
