#include "resilsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace resilsim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(std::string path, std::string message) {
    throw ConfigError(std::vector<Diagnostic>{
        Diagnostic{std::move(path), std::move(message)}});
}

std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
    std::ostringstream out;
    out << "invalid scenario (" << diagnostics.size() << " problem"
        << (diagnostics.size() == 1 ? "" : "s") << ")";
    for (const Diagnostic& d : diagnostics) {
        out << "\n  " << (d.path.empty() ? "<document>" : d.path) << ": "
            << d.message;
    }
    return out.str();
}

class Collector {
public:
    void error(std::string path, std::string message) {
        diagnostics_.push_back({std::move(path), std::move(message)});
    }
    bool ok() const { return diagnostics_.empty(); }
    std::vector<Diagnostic> take() { return std::move(diagnostics_); }

private:
    std::vector<Diagnostic> diagnostics_;
};

bool valid_id(const std::string& id) {
    if (id.empty()) {
        return false;
    }
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok) {
            return false;
        }
    }
    return true;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed, Collector& errors) {
    for (const auto& item : obj.items()) {
        const bool known =
            std::any_of(allowed.begin(), allowed.end(),
                        [&](const char* key) { return item.key() == key; });
        if (!known) {
            errors.error(path, "unknown key '" + item.key() + "'");
        }
    }
}

const json* member(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number_or(const json& obj, const char* key, const std::string& path,
                 Collector& errors, double fallback, bool required = false) {
    const json* v = member(obj, key);
    if (!v) {
        if (required) {
            errors.error(path + "." + key, "missing required number");
        }
        return fallback;
    }
    if (!v->is_number()) {
        errors.error(path + "." + key, "expected a number");
        return fallback;
    }
    return v->get<double>();
}

long long integer_or(const json& obj, const char* key, const std::string& path,
                     Collector& errors, long long fallback,
                     bool required = false) {
    const json* v = member(obj, key);
    if (!v) {
        if (required) {
            errors.error(path + "." + key, "missing required integer");
        }
        return fallback;
    }
    if (!v->is_number_integer()) {
        errors.error(path + "." + key, "expected an integer");
        return fallback;
    }
    return v->get<long long>();
}

bool bool_or(const json& obj, const char* key, const std::string& path,
             Collector& errors, bool fallback) {
    const json* v = member(obj, key);
    if (!v) {
        return fallback;
    }
    if (!v->is_boolean()) {
        errors.error(path + "." + key, "expected a boolean");
        return fallback;
    }
    return v->get<bool>();
}

std::string string_or(const json& obj, const char* key, const std::string& path,
                      Collector& errors, std::string fallback,
                      bool required = false) {
    const json* v = member(obj, key);
    if (!v) {
        if (required) {
            errors.error(path + "." + key, "missing required string");
        }
        return fallback;
    }
    if (!v->is_string()) {
        errors.error(path + "." + key, "expected a string");
        return fallback;
    }
    return v->get<std::string>();
}

std::map<HealthState, double> severity_map(const json& obj,
                                           const std::string& path,
                                           Collector& errors) {
    std::map<HealthState, double> result;
    if (!obj.is_object()) {
        errors.error(path, "expected an object of {ill state: weight}");
        return result;
    }
    for (const auto& item : obj.items()) {
        HealthState state;
        try {
            state = health_state_from_token(item.key());
        } catch (const std::invalid_argument&) {
            errors.error(path, "unknown health state '" + item.key() + "'");
            continue;
        }
        if (!is_ill(state)) {
            errors.error(path, "'" + item.key() + "' is not an ill state");
            continue;
        }
        if (!item.value().is_number()) {
            errors.error(path + "." + item.key(), "expected a number");
            continue;
        }
        result[state] = item.value().get<double>();
    }
    return result;
}

DiseaseConfig parse_disease(const json& obj, const std::string& path,
                            Collector& errors) {
    DiseaseConfig disease;
    check_keys(obj, path, {"id", "sir", "states"}, errors);
    disease.id = string_or(obj, "id", path, errors, "", true);
    if (const json* sir = member(obj, "sir")) {
        check_keys(*sir, path + ".sir", {"transmission_rate", "recovery_rate"},
                   errors);
        disease.sir.beta =
            number_or(*sir, "transmission_rate", path + ".sir", errors, 0.0);
        disease.sir.gamma =
            number_or(*sir, "recovery_rate", path + ".sir", errors, 0.0);
    }
    const json* states = member(obj, "states");
    if (!states || !states->is_object()) {
        errors.error(path + ".states", "missing state/care tables");
        return disease;
    }
    for (const auto& state_item : states->items()) {
        HealthState state;
        try {
            state = health_state_from_token(state_item.key());
        } catch (const std::invalid_argument&) {
            errors.error(path + ".states",
                         "unknown health state '" + state_item.key() + "'");
            continue;
        }
        if (!is_ill(state)) {
            errors.error(path + ".states",
                         "'" + state_item.key() + "' is not an ill state");
            continue;
        }
        const std::string state_path =
            path + ".states." + std::string(to_token(state));
        if (!state_item.value().is_object()) {
            errors.error(state_path, "expected an object of {care level: cell}");
            continue;
        }
        for (const auto& care_item : state_item.value().items()) {
            CareLevel care;
            try {
                care = care_level_from_token(care_item.key());
            } catch (const std::invalid_argument&) {
                errors.error(state_path,
                             "unknown care level '" + care_item.key() + "'");
                continue;
            }
            const std::string cell_path =
                state_path + "." + std::string(to_token(care));
            if (care > required_care(state)) {
                errors.error(cell_path,
                             "care level above the state's requirement");
                continue;
            }
            const json& cell = care_item.value();
            if (!cell.is_object()) {
                errors.error(cell_path, "expected an object");
                continue;
            }
            check_keys(cell, cell_path,
                       {"mean_days", "recovery", "worsening", "death"}, errors);
            DiseaseCellConfig c;
            c.mean_days = number_or(cell, "mean_days", cell_path, errors, 1.0, true);
            c.recovery = number_or(cell, "recovery", cell_path, errors, 0.0, true);
            c.worsening = number_or(cell, "worsening", cell_path, errors, 0.0, true);
            c.death = number_or(cell, "death", cell_path, errors, 0.0, true);
            disease.states[state][care] = c;
        }
    }
    return disease;
}

PopulationConfig parse_population(const json& obj, const std::string& path,
                                  Collector& errors) {
    PopulationConfig pop;
    check_keys(obj, path,
               {"id", "size", "baseline_incidence_per_100k", "baseline_disease",
                "baseline_severity", "diseases", "routing", "mci_events"},
               errors);
    pop.id = string_or(obj, "id", path, errors, "", true);
    pop.size = integer_or(obj, "size", path, errors, 0, true);
    pop.baseline_incidence_per_100k =
        number_or(obj, "baseline_incidence_per_100k", path, errors, 0.0);
    if (member(obj, "baseline_disease")) {
        pop.baseline_disease = string_or(obj, "baseline_disease", path, errors, "");
    }
    if (const json* sev = member(obj, "baseline_severity")) {
        pop.baseline_severity =
            severity_map(*sev, path + ".baseline_severity", errors);
    }
    if (const json* list = member(obj, "diseases")) {
        if (!list->is_array()) {
            errors.error(path + ".diseases", "expected an array");
        } else {
            for (std::size_t i = 0; i < list->size(); ++i) {
                const std::string entry_path =
                    path + ".diseases[" + std::to_string(i) + "]";
                const json& entry = (*list)[i];
                if (!entry.is_object()) {
                    errors.error(entry_path, "expected an object");
                    continue;
                }
                check_keys(entry, entry_path,
                           {"disease", "initial_infected", "initial_recovered"},
                           errors);
                PopulationDiseaseConfig pd;
                pd.disease = string_or(entry, "disease", entry_path, errors, "", true);
                pd.initial_infected =
                    integer_or(entry, "initial_infected", entry_path, errors, 0);
                pd.initial_recovered =
                    integer_or(entry, "initial_recovered", entry_path, errors, 0);
                pop.diseases.push_back(std::move(pd));
            }
        }
    }
    if (const json* routing = member(obj, "routing")) {
        if (!routing->is_object()) {
            errors.error(path + ".routing", "expected an object of {hospital: weight}");
        } else {
            for (const auto& item : routing->items()) {
                if (!item.value().is_number()) {
                    errors.error(path + ".routing." + item.key(), "expected a number");
                    continue;
                }
                pop.routing[item.key()] = item.value().get<double>();
            }
        }
    }
    if (const json* list = member(obj, "mci_events")) {
        if (!list->is_array()) {
            errors.error(path + ".mci_events", "expected an array");
        } else {
            for (std::size_t i = 0; i < list->size(); ++i) {
                const std::string entry_path =
                    path + ".mci_events[" + std::to_string(i) + "]";
                const json& entry = (*list)[i];
                if (!entry.is_object()) {
                    errors.error(entry_path, "expected an object");
                    continue;
                }
                check_keys(entry, entry_path, {"day", "count", "severity", "disease"},
                           errors);
                MciConfig mci;
                mci.day = static_cast<int>(
                    integer_or(entry, "day", entry_path, errors, 0, true));
                mci.count = integer_or(entry, "count", entry_path, errors, 0, true);
                if (const json* sev = member(entry, "severity")) {
                    mci.severity = severity_map(*sev, entry_path + ".severity", errors);
                } else {
                    errors.error(entry_path + ".severity", "missing severity distribution");
                }
                if (member(entry, "disease")) {
                    mci.disease = string_or(entry, "disease", entry_path, errors, "");
                }
                pop.mci_events.push_back(std::move(mci));
            }
        }
    }
    return pop;
}

HospitalConfig parse_hospital(const json& obj, const std::string& path,
                              Collector& errors) {
    HospitalConfig hospital;
    check_keys(obj, path,
               {"id", "it_node", "referral_partners", "referral_enabled", "services"},
               errors);
    hospital.id = string_or(obj, "id", path, errors, "", true);
    hospital.it_node = string_or(obj, "it_node", path, errors, "", true);
    hospital.referral_enabled = bool_or(obj, "referral_enabled", path, errors, false);
    if (const json* partners = member(obj, "referral_partners")) {
        if (!partners->is_array()) {
            errors.error(path + ".referral_partners", "expected an array of ids");
        } else {
            for (const json& p : *partners) {
                if (!p.is_string()) {
                    errors.error(path + ".referral_partners", "expected an array of ids");
                    continue;
                }
                hospital.referral_partners.push_back(p.get<std::string>());
            }
        }
    }
    if (const json* services = member(obj, "services")) {
        if (!services->is_object()) {
            errors.error(path + ".services", "expected an object");
        } else {
            for (const auto& item : services->items()) {
                CareLevel level;
                try {
                    level = care_level_from_token(item.key());
                } catch (const std::invalid_argument&) {
                    errors.error(path + ".services",
                                 "unknown care level '" + item.key() + "'");
                    continue;
                }
                if (level == CareLevel::no_followup) {
                    errors.error(path + ".services", "no_followup is not a service");
                    continue;
                }
                const std::string service_path =
                    path + ".services." + std::string(to_token(level));
                const json& sv = item.value();
                if (!sv.is_object()) {
                    errors.error(service_path, "expected an object");
                    continue;
                }
                check_keys(sv, service_path, {"capacity", "enabled"}, errors);
                ServiceConfig service;
                service.enabled = bool_or(sv, "enabled", service_path, errors, true);
                if (member(sv, "capacity")) {
                    service.capacity =
                        integer_or(sv, "capacity", service_path, errors, 0);
                }
                hospital.services[level] = service;
            }
        }
    }
    return hospital;
}

double resolve_vulnerability(const json& obj, const std::string& path,
                             const CyberConfig& cyber, Collector& errors) {
    const json* v = member(obj, "vulnerability");
    if (!v) {
        errors.error(path + ".vulnerability", "missing vulnerability (number or class)");
        return 0.0;
    }
    if (v->is_number()) {
        return v->get<double>();
    }
    if (v->is_string()) {
        const std::string name = v->get<std::string>();
        for (const auto& [label, value] : cyber.vulnerability_classes) {
            if (label == name) {
                return value;
            }
        }
        errors.error(path + ".vulnerability", "unknown vulnerability class '" + name + "'");
        return 0.0;
    }
    errors.error(path + ".vulnerability", "expected a number or a class name");
    return 0.0;
}

ItNodeConfig parse_it_node(const json& obj, const std::string& path,
                           const CyberConfig& cyber, Collector& errors) {
    ItNodeConfig node;
    check_keys(obj, path,
               {"id", "service_capacity", "vulnerability", "recovery_capacity",
                "depends_on"},
               errors);
    node.id = string_or(obj, "id", path, errors, "", true);
    node.service_capacity = number_or(obj, "service_capacity", path, errors, 0.0);
    node.vulnerability = resolve_vulnerability(obj, path, cyber, errors);
    node.recovery_capacity = number_or(obj, "recovery_capacity", path, errors, 1.0);
    if (const json* deps = member(obj, "depends_on")) {
        if (!deps->is_array()) {
            errors.error(path + ".depends_on", "expected an array of ids");
        } else {
            for (const json& d : *deps) {
                if (!d.is_string()) {
                    errors.error(path + ".depends_on", "expected an array of ids");
                    continue;
                }
                node.depends_on.push_back(d.get<std::string>());
            }
        }
    }
    return node;
}

AttackEventConfig parse_attack_event(const json& obj, const std::string& path,
                                     Collector& errors, bool payload_allowed) {
    AttackEventConfig event;
    check_keys(obj, path,
               {"kind", "start_day", "target", "base_outage_days",
                "detection_delay_days", "duration_days", "request_load", "payload"},
               errors);
    const std::string kind = string_or(obj, "kind", path, errors, "", true);
    if (kind == "botnet") {
        event.kind = AttackKind::botnet;
    } else if (kind == "ransomware") {
        event.kind = AttackKind::ransomware;
    } else if (kind == "ddos") {
        event.kind = AttackKind::ddos;
    } else if (!kind.empty()) {
        errors.error(path + ".kind", "unknown attack kind '" + kind + "'");
    }
    event.start_day =
        static_cast<int>(integer_or(obj, "start_day", path, errors, 0, !payload_allowed ? false : true));
    if (member(obj, "target")) {
        event.target = string_or(obj, "target", path, errors, "");
    }
    event.base_outage_days = number_or(obj, "base_outage_days", path, errors, 0.0);
    event.detection_delay_days = static_cast<int>(
        integer_or(obj, "detection_delay_days", path, errors, 0));
    event.duration_days =
        static_cast<int>(integer_or(obj, "duration_days", path, errors, 0));
    event.request_load = number_or(obj, "request_load", path, errors, 0.0);
    if (const json* payload = member(obj, "payload")) {
        if (!payload_allowed) {
            errors.error(path + ".payload", "nested payloads are not allowed");
        } else if (event.kind != AttackKind::botnet) {
            errors.error(path + ".payload", "only botnet events carry a payload");
        } else if (!payload->is_object()) {
            errors.error(path + ".payload", "expected an object");
        } else {
            AttackEventConfig inner = parse_attack_event(
                *payload, path + ".payload", errors, /*payload_allowed=*/false);
            if (inner.kind == AttackKind::botnet) {
                errors.error(path + ".payload", "payload cannot be another botnet");
            }
            event.payload.push_back(std::move(inner));
        }
    }
    return event;
}

AttackerConfig parse_attacker(const json& obj, const std::string& path,
                              Collector& errors) {
    AttackerConfig attacker;
    check_keys(obj, path, {"id", "threat_level", "campaign"}, errors);
    attacker.id = string_or(obj, "id", path, errors, "", true);
    attacker.threat_level = number_or(obj, "threat_level", path, errors, 1.0);
    if (const json* list = member(obj, "campaign")) {
        if (!list->is_array()) {
            errors.error(path + ".campaign", "expected an array");
        } else {
            for (std::size_t i = 0; i < list->size(); ++i) {
                const std::string event_path =
                    path + ".campaign[" + std::to_string(i) + "]";
                if (!(*list)[i].is_object()) {
                    errors.error(event_path, "expected an object");
                    continue;
                }
                attacker.campaign.push_back(
                    parse_attack_event((*list)[i], event_path, errors, true));
            }
        }
    }
    return attacker;
}

ScenarioConfig structural_parse(const json& doc, Collector& errors) {
    ScenarioConfig cfg;
    if (!doc.is_object()) {
        errors.error("", "scenario document must be a JSON object");
        return cfg;
    }
    check_keys(doc, "",
               {"schema_version", "horizon_days", "monte_carlo", "quality",
                "cyber", "countermeasures", "diseases", "populations",
                "hospitals", "it_nodes", "attackers", "contact_matrix"},
               errors);
    cfg.schema_version =
        static_cast<int>(integer_or(doc, "schema_version", "", errors, 1));
    cfg.horizon_days =
        static_cast<int>(integer_or(doc, "horizon_days", "", errors, 0, true));
    if (const json* mc = member(doc, "monte_carlo")) {
        check_keys(*mc, "monte_carlo", {"runs", "master_seed"}, errors);
        cfg.monte_carlo.runs =
            static_cast<int>(integer_or(*mc, "runs", "monte_carlo", errors, 1));
        if (const json* seed = member(*mc, "master_seed")) {
            if (seed->is_number_unsigned() || seed->is_number_integer()) {
                cfg.monte_carlo.master_seed = seed->get<std::uint64_t>();
            } else {
                errors.error("monte_carlo.master_seed", "expected an integer");
            }
        }
    }
    if (const json* q = member(doc, "quality")) {
        check_keys(*q, "quality",
                   {"saturation_slope", "floor", "utilization_window_days"}, errors);
        cfg.quality.saturation_slope =
            number_or(*q, "saturation_slope", "quality", errors, 0.5);
        cfg.quality.floor = number_or(*q, "floor", "quality", errors, 0.25);
        cfg.quality.utilization_window_days = static_cast<int>(
            integer_or(*q, "utilization_window_days", "quality", errors, 14));
    }
    if (const json* c = member(doc, "cyber")) {
        check_keys(*c, "cyber",
                   {"vulnerability_classes", "botnet_spread_probability",
                    "ddos_absorb_factor", "recovery_ramp_days"},
                   errors);
        if (const json* classes = member(*c, "vulnerability_classes")) {
            if (!classes->is_object()) {
                errors.error("cyber.vulnerability_classes", "expected an object");
            } else {
                cfg.cyber.vulnerability_classes.clear();
                for (const auto& item : classes->items()) {
                    if (!item.value().is_number()) {
                        errors.error("cyber.vulnerability_classes." + item.key(),
                                     "expected a number");
                        continue;
                    }
                    cfg.cyber.vulnerability_classes.emplace_back(
                        item.key(), item.value().get<double>());
                }
            }
        }
        cfg.cyber.botnet_spread_probability =
            number_or(*c, "botnet_spread_probability", "cyber", errors, 0.1);
        cfg.cyber.ddos_absorb_factor =
            number_or(*c, "ddos_absorb_factor", "cyber", errors, 2.0);
        cfg.cyber.recovery_ramp_days = static_cast<int>(
            integer_or(*c, "recovery_ramp_days", "cyber", errors, 0));
    }
    if (const json* cm = member(doc, "countermeasures")) {
        check_keys(*cm, "countermeasures", {"recovery_days_override"}, errors);
        if (member(*cm, "recovery_days_override")) {
            cfg.countermeasures.recovery_days_override =
                number_or(*cm, "recovery_days_override", "countermeasures", errors, 0.0);
        }
    }
    const auto parse_array = [&](const char* key, auto parse_one, auto& sink) {
        const json* list = member(doc, key);
        if (!list) {
            return;
        }
        if (!list->is_array()) {
            errors.error(key, "expected an array");
            return;
        }
        for (std::size_t i = 0; i < list->size(); ++i) {
            const std::string path = std::string(key) + "[" + std::to_string(i) + "]";
            if (!(*list)[i].is_object()) {
                errors.error(path, "expected an object");
                continue;
            }
            sink.push_back(parse_one((*list)[i], path));
        }
    };
    parse_array(
        "diseases",
        [&](const json& o, const std::string& p) { return parse_disease(o, p, errors); },
        cfg.diseases);
    parse_array(
        "populations",
        [&](const json& o, const std::string& p) { return parse_population(o, p, errors); },
        cfg.populations);
    parse_array(
        "hospitals",
        [&](const json& o, const std::string& p) { return parse_hospital(o, p, errors); },
        cfg.hospitals);
    parse_array(
        "it_nodes",
        [&](const json& o, const std::string& p) {
            return parse_it_node(o, p, cfg.cyber, errors);
        },
        cfg.it_nodes);
    parse_array(
        "attackers",
        [&](const json& o, const std::string& p) { return parse_attacker(o, p, errors); },
        cfg.attackers);
    if (const json* matrix = member(doc, "contact_matrix")) {
        if (!matrix->is_object()) {
            errors.error("contact_matrix", "expected an object of rows");
        } else {
            for (const auto& row : matrix->items()) {
                if (!row.value().is_object()) {
                    errors.error("contact_matrix." + row.key(), "expected an object");
                    continue;
                }
                for (const auto& cell : row.value().items()) {
                    if (!cell.value().is_number()) {
                        errors.error("contact_matrix." + row.key() + "." + cell.key(),
                                     "expected a number");
                        continue;
                    }
                    cfg.contact_matrix[row.key()][cell.key()] =
                        cell.value().get<double>();
                }
            }
        }
    }
    return cfg;
}

template <typename T>
void check_unique_ids(const std::vector<T>& items, const char* section,
                      Collector& errors) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const std::string path = std::string(section) + "[" + std::to_string(i) + "].id";
        if (!valid_id(items[i].id)) {
            errors.error(path, "ids must match [A-Za-z0-9_-]+");
            continue;
        }
        if (!seen.insert(items[i].id).second) {
            errors.error(path, "duplicate id '" + items[i].id + "'");
        }
    }
}

template <typename T>
std::ptrdiff_t index_of(const std::vector<T>& items, const std::string& id) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].id == id) {
            return static_cast<std::ptrdiff_t>(i);
        }
    }
    return -1;
}

void normalize_distribution(std::map<HealthState, double>& dist,
                            const std::string& path, Collector& errors) {
    double sum = 0.0;
    for (const auto& [state, weight] : dist) {
        if (weight < 0.0) {
            errors.error(path, "negative weight");
            return;
        }
        sum += weight;
    }
    if (!(sum > 0.0)) {
        errors.error(path, "non-normalizable probability vector (sum must be > 0)");
        return;
    }
    for (auto& [state, weight] : dist) {
        weight /= sum;
    }
}

void semantic_validate(ScenarioConfig& cfg, Collector& errors) {
    if (cfg.schema_version != 1) {
        errors.error("schema_version", "unsupported schema version");
    }
    if (cfg.horizon_days <= 0) {
        errors.error("horizon_days", "horizon must be a positive number of days");
    }
    if (cfg.monte_carlo.runs < 1) {
        errors.error("monte_carlo.runs", "at least one run is required");
    }
    if (cfg.quality.saturation_slope < 0.0) {
        errors.error("quality.saturation_slope", "must be >= 0");
    }
    if (cfg.quality.floor < 0.0 || cfg.quality.floor > 1.0) {
        errors.error("quality.floor", "must lie in [0, 1]");
    }
    if (cfg.quality.utilization_window_days < 1) {
        errors.error("quality.utilization_window_days", "must be >= 1");
    }
    if (cfg.cyber.botnet_spread_probability < 0.0 ||
        cfg.cyber.botnet_spread_probability > 1.0) {
        errors.error("cyber.botnet_spread_probability", "must lie in [0, 1]");
    }
    if (cfg.cyber.ddos_absorb_factor < 1.0) {
        errors.error("cyber.ddos_absorb_factor", "must be >= 1");
    }
    if (cfg.cyber.recovery_ramp_days < 0) {
        errors.error("cyber.recovery_ramp_days", "must be >= 0");
    }
    for (const auto& [name, value] : cfg.cyber.vulnerability_classes) {
        if (value < 0.0 || value > 1.0) {
            errors.error("cyber.vulnerability_classes." + name, "must lie in [0, 1]");
        }
    }
    if (cfg.countermeasures.recovery_days_override &&
        *cfg.countermeasures.recovery_days_override < 0.0) {
        errors.error("countermeasures.recovery_days_override", "must be >= 0");
    }

    check_unique_ids(cfg.diseases, "diseases", errors);
    check_unique_ids(cfg.populations, "populations", errors);
    check_unique_ids(cfg.hospitals, "hospitals", errors);
    check_unique_ids(cfg.it_nodes, "it_nodes", errors);
    check_unique_ids(cfg.attackers, "attackers", errors);

    for (std::size_t d = 0; d < cfg.diseases.size(); ++d) {
        DiseaseConfig& disease = cfg.diseases[d];
        const std::string path = "diseases[" + std::to_string(d) + "]";
        if (disease.sir.beta < 0.0 || disease.sir.gamma < 0.0) {
            errors.error(path + ".sir", "rates must be >= 0");
        }
        for (int s = 0; s < kIllStates; ++s) {
            const HealthState state = ill_state(s);
            const std::string state_path =
                path + ".states." + std::string(to_token(state));
            const auto state_it = disease.states.find(state);
            if (state_it == disease.states.end()) {
                errors.error(state_path, "missing row for this ill state");
                continue;
            }
            for (int c = 0; c <= static_cast<int>(required_care(state)); ++c) {
                const CareLevel care = static_cast<CareLevel>(c);
                const std::string cell_path =
                    state_path + "." + std::string(to_token(care));
                const auto cell_it = state_it->second.find(care);
                if (cell_it == state_it->second.end()) {
                    errors.error(cell_path, "missing cell for this care level");
                    continue;
                }
                DiseaseCellConfig& cell = cell_it->second;
                if (cell.mean_days < 1.0) {
                    errors.error(cell_path + ".mean_days",
                                 "mean sojourn must be >= 1 day");
                }
                if (cell.recovery < 0.0 || cell.worsening < 0.0 || cell.death < 0.0) {
                    errors.error(cell_path, "outcome proportions must be >= 0");
                    continue;
                }
                const double sum = cell.recovery + cell.worsening + cell.death;
                if (std::fabs(sum - 100.0) > 0.5) {
                    errors.error(cell_path,
                                 "outcome proportions sum to " + std::to_string(sum) +
                                     " per 100 patients (allowed 100 +/- 0.5)");
                    continue;
                }
                const double scale = 100.0 / sum;
                cell.recovery *= scale;
                cell.worsening *= scale;
                cell.death *= scale;
                if (state == HealthState::critical && cell.worsening != 0.0) {
                    // No state above critical: fold residual worsening into death.
                    cell.death += cell.worsening;
                    cell.worsening = 0.0;
                }
            }
        }
    }

    for (std::size_t n = 0; n < cfg.it_nodes.size(); ++n) {
        ItNodeConfig& node = cfg.it_nodes[n];
        const std::string path = "it_nodes[" + std::to_string(n) + "]";
        if (node.vulnerability < 0.0 || node.vulnerability > 1.0) {
            errors.error(path + ".vulnerability", "must lie in [0, 1]");
        }
        if (!(node.recovery_capacity > 0.0)) {
            errors.error(path + ".recovery_capacity", "must be > 0");
        }
        if (node.service_capacity < 0.0) {
            errors.error(path + ".service_capacity", "must be >= 0");
        }
        for (const std::string& dep : node.depends_on) {
            if (index_of(cfg.it_nodes, dep) < 0) {
                errors.error(path + ".depends_on", "unknown IT node '" + dep + "'");
            }
        }
    }
    // Cycle check over resolvable edges (Kahn).
    {
        std::vector<int> indegree(cfg.it_nodes.size(), 0);
        std::vector<std::vector<int>> out(cfg.it_nodes.size());
        for (std::size_t n = 0; n < cfg.it_nodes.size(); ++n) {
            for (const std::string& dep : cfg.it_nodes[n].depends_on) {
                const std::ptrdiff_t di = index_of(cfg.it_nodes, dep);
                if (di >= 0) {
                    out[di].push_back(static_cast<int>(n));
                    ++indegree[n];
                }
            }
        }
        std::vector<int> ready;
        for (std::size_t n = 0; n < cfg.it_nodes.size(); ++n) {
            if (indegree[n] == 0) {
                ready.push_back(static_cast<int>(n));
            }
        }
        std::size_t seen = 0;
        while (!ready.empty()) {
            const int n = ready.back();
            ready.pop_back();
            ++seen;
            for (int next : out[n]) {
                if (--indegree[next] == 0) {
                    ready.push_back(next);
                }
            }
        }
        if (seen != cfg.it_nodes.size()) {
            errors.error("it_nodes", "cyclic IT dependency graph");
        }
    }

    for (std::size_t h = 0; h < cfg.hospitals.size(); ++h) {
        HospitalConfig& hospital = cfg.hospitals[h];
        const std::string path = "hospitals[" + std::to_string(h) + "]";
        if (index_of(cfg.it_nodes, hospital.it_node) < 0) {
            errors.error(path + ".it_node",
                         "unknown IT node '" + hospital.it_node + "'");
        }
        for (const std::string& partner : hospital.referral_partners) {
            if (partner == hospital.id) {
                errors.error(path + ".referral_partners", "hospital cannot refer to itself");
            } else if (index_of(cfg.hospitals, partner) < 0) {
                errors.error(path + ".referral_partners",
                             "unknown hospital '" + partner + "'");
            }
        }
        for (auto& [level, service] : hospital.services) {
            if (service.capacity && *service.capacity < 0) {
                errors.error(path + ".services." + std::string(to_token(level)) +
                                 ".capacity",
                             "must be >= 0 (or null for unbounded)");
            }
        }
    }

    for (std::size_t p = 0; p < cfg.populations.size(); ++p) {
        PopulationConfig& pop = cfg.populations[p];
        const std::string path = "populations[" + std::to_string(p) + "]";
        if (pop.size <= 0) {
            errors.error(path + ".size", "must be > 0");
        }
        if (pop.baseline_incidence_per_100k < 0.0) {
            errors.error(path + ".baseline_incidence_per_100k", "must be >= 0");
        }
        const bool needs_baseline_disease =
            pop.baseline_incidence_per_100k > 0.0 ||
            std::any_of(pop.mci_events.begin(), pop.mci_events.end(),
                        [](const MciConfig& m) { return !m.disease.has_value(); });
        if (pop.baseline_disease) {
            if (index_of(cfg.diseases, *pop.baseline_disease) < 0) {
                errors.error(path + ".baseline_disease",
                             "unknown disease '" + *pop.baseline_disease + "'");
            }
        } else if (needs_baseline_disease && !pop.mci_events.empty()) {
            errors.error(path + ".baseline_disease",
                         "required by baseline demand or MCI events without a disease");
        } else if (needs_baseline_disease) {
            errors.error(path + ".baseline_disease",
                         "required when baseline incidence is positive");
        }
        if (pop.baseline_severity.empty()) {
            pop.baseline_severity[HealthState::moderate] = 1.0;
        }
        normalize_distribution(pop.baseline_severity, path + ".baseline_severity",
                               errors);
        long long committed = 0;
        for (std::size_t i = 0; i < pop.diseases.size(); ++i) {
            PopulationDiseaseConfig& pd = pop.diseases[i];
            const std::string entry_path =
                path + ".diseases[" + std::to_string(i) + "]";
            if (index_of(cfg.diseases, pd.disease) < 0) {
                errors.error(entry_path + ".disease",
                             "unknown disease '" + pd.disease + "'");
            }
            if (pd.initial_infected < 0 || pd.initial_recovered < 0) {
                errors.error(entry_path, "initial counts must be >= 0");
            }
            committed = std::max(committed, pd.initial_infected + pd.initial_recovered);
        }
        if (committed > pop.size) {
            errors.error(path + ".diseases",
                         "initial infected + recovered exceed the population size");
        }
        double routing_sum = 0.0;
        for (auto& [hospital, weight] : pop.routing) {
            if (index_of(cfg.hospitals, hospital) < 0) {
                errors.error(path + ".routing." + hospital,
                             "unknown hospital '" + hospital + "'");
            }
            if (weight < 0.0) {
                errors.error(path + ".routing." + hospital, "must be >= 0");
            }
            routing_sum += weight;
        }
        if (!pop.routing.empty()) {
            if (!(routing_sum > 0.0)) {
                errors.error(path + ".routing",
                             "non-normalizable probability vector (sum must be > 0)");
            } else {
                for (auto& [hospital, weight] : pop.routing) {
                    weight /= routing_sum;
                }
            }
        }
        for (std::size_t i = 0; i < pop.mci_events.size(); ++i) {
            MciConfig& mci = pop.mci_events[i];
            const std::string entry_path =
                path + ".mci_events[" + std::to_string(i) + "]";
            if (mci.day < 0 || mci.day > cfg.horizon_days) {
                errors.error(entry_path + ".day", "must lie within the horizon");
            }
            if (mci.count < 0) {
                errors.error(entry_path + ".count", "must be >= 0");
            }
            if (mci.disease && index_of(cfg.diseases, *mci.disease) < 0) {
                errors.error(entry_path + ".disease",
                             "unknown disease '" + *mci.disease + "'");
            }
            normalize_distribution(mci.severity, entry_path + ".severity", errors);
        }
    }

    for (std::size_t a = 0; a < cfg.attackers.size(); ++a) {
        AttackerConfig& attacker = cfg.attackers[a];
        const std::string path = "attackers[" + std::to_string(a) + "]";
        if (attacker.threat_level < 0.0) {
            errors.error(path + ".threat_level", "must be >= 0");
        }
        for (std::size_t e = 0; e < attacker.campaign.size(); ++e) {
            const AttackEventConfig& event = attacker.campaign[e];
            const std::string event_path =
                path + ".campaign[" + std::to_string(e) + "]";
            if (event.start_day < 0 || event.start_day > cfg.horizon_days) {
                errors.error(event_path + ".start_day", "must lie within the horizon");
            }
            if (event.target && index_of(cfg.it_nodes, *event.target) < 0) {
                errors.error(event_path + ".target",
                             "unknown IT node '" + *event.target + "'");
            }
            if (event.base_outage_days < 0.0 || event.detection_delay_days < 0 ||
                event.duration_days < 0 || event.request_load < 0.0) {
                errors.error(event_path, "attack parameters must be >= 0");
            }
            if (!event.payload.empty() && event.payload.front().target) {
                errors.error(event_path + ".payload.target",
                             "payloads detonate on the infected node; no target allowed");
            }
        }
    }

    for (auto& [row_id, row] : cfg.contact_matrix) {
        const std::string row_path = "contact_matrix." + row_id;
        if (index_of(cfg.populations, row_id) < 0) {
            errors.error(row_path, "unknown population '" + row_id + "'");
            continue;
        }
        double sum = 0.0;
        for (auto& [col_id, weight] : row) {
            if (index_of(cfg.populations, col_id) < 0) {
                errors.error(row_path + "." + col_id,
                             "unknown population '" + col_id + "'");
            }
            if (weight < 0.0) {
                errors.error(row_path + "." + col_id, "must be >= 0");
            }
            sum += weight;
        }
        if (!(sum > 0.0)) {
            errors.error(row_path, "non-normalizable mixing row (sum must be > 0)");
        } else {
            for (auto& [col_id, weight] : row) {
                weight /= sum;
            }
        }
    }
}

ordered_json severity_json(const std::map<HealthState, double>& severity) {
    ordered_json out = ordered_json::object();
    for (const auto& [state, weight] : severity) {
        out[std::string(to_token(state))] = weight;
    }
    return out;
}

ordered_json event_json(const AttackEventConfig& event) {
    ordered_json out;
    switch (event.kind) {
        case AttackKind::botnet:
            out["kind"] = "botnet";
            break;
        case AttackKind::ransomware:
            out["kind"] = "ransomware";
            break;
        case AttackKind::ddos:
            out["kind"] = "ddos";
            break;
    }
    out["start_day"] = event.start_day;
    if (event.target) {
        out["target"] = *event.target;
    }
    out["base_outage_days"] = event.base_outage_days;
    out["detection_delay_days"] = event.detection_delay_days;
    out["duration_days"] = event.duration_days;
    out["request_load"] = event.request_load;
    if (!event.payload.empty()) {
        ordered_json payload = event_json(event.payload.front());
        payload.erase("start_day");
        out["payload"] = payload;
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

ScenarioConfig parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("", std::string("not valid JSON: ") + e.what());
    }
    Collector errors;
    ScenarioConfig cfg = structural_parse(doc, errors);
    if (errors.ok()) {
        semantic_validate(cfg, errors);
    }
    if (!errors.ok()) {
        throw ConfigError(errors.take());
    }
    return cfg;
}

ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(path.string(), "cannot open scenario file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    ordered_json doc;
    doc["schema_version"] = cfg.schema_version;
    doc["horizon_days"] = cfg.horizon_days;
    doc["monte_carlo"] = {{"runs", cfg.monte_carlo.runs},
                          {"master_seed", cfg.monte_carlo.master_seed}};
    doc["quality"] = {
        {"saturation_slope", cfg.quality.saturation_slope},
        {"floor", cfg.quality.floor},
        {"utilization_window_days", cfg.quality.utilization_window_days}};
    ordered_json classes = ordered_json::object();
    for (const auto& [name, value] : cfg.cyber.vulnerability_classes) {
        classes[name] = value;
    }
    doc["cyber"] = {
        {"vulnerability_classes", classes},
        {"botnet_spread_probability", cfg.cyber.botnet_spread_probability},
        {"ddos_absorb_factor", cfg.cyber.ddos_absorb_factor},
        {"recovery_ramp_days", cfg.cyber.recovery_ramp_days}};
    doc["countermeasures"] = ordered_json::object();
    if (cfg.countermeasures.recovery_days_override) {
        doc["countermeasures"]["recovery_days_override"] =
            *cfg.countermeasures.recovery_days_override;
    }
    doc["diseases"] = ordered_json::array();
    for (const DiseaseConfig& disease : cfg.diseases) {
        ordered_json d;
        d["id"] = disease.id;
        d["sir"] = {{"transmission_rate", disease.sir.beta},
                    {"recovery_rate", disease.sir.gamma}};
        ordered_json states = ordered_json::object();
        for (const auto& [state, cells] : disease.states) {
            ordered_json row = ordered_json::object();
            for (const auto& [care, cell] : cells) {
                row[std::string(to_token(care))] = {{"mean_days", cell.mean_days},
                                                    {"recovery", cell.recovery},
                                                    {"worsening", cell.worsening},
                                                    {"death", cell.death}};
            }
            states[std::string(to_token(state))] = row;
        }
        d["states"] = states;
        doc["diseases"].push_back(d);
    }
    doc["populations"] = ordered_json::array();
    for (const PopulationConfig& pop : cfg.populations) {
        ordered_json p;
        p["id"] = pop.id;
        p["size"] = pop.size;
        p["baseline_incidence_per_100k"] = pop.baseline_incidence_per_100k;
        if (pop.baseline_disease) {
            p["baseline_disease"] = *pop.baseline_disease;
        }
        p["baseline_severity"] = severity_json(pop.baseline_severity);
        p["diseases"] = ordered_json::array();
        for (const PopulationDiseaseConfig& pd : pop.diseases) {
            p["diseases"].push_back({{"disease", pd.disease},
                                     {"initial_infected", pd.initial_infected},
                                     {"initial_recovered", pd.initial_recovered}});
        }
        ordered_json routing = ordered_json::object();
        for (const auto& [hospital, weight] : pop.routing) {
            routing[hospital] = weight;
        }
        p["routing"] = routing;
        p["mci_events"] = ordered_json::array();
        for (const MciConfig& mci : pop.mci_events) {
            ordered_json m;
            m["day"] = mci.day;
            m["count"] = mci.count;
            m["severity"] = severity_json(mci.severity);
            if (mci.disease) {
                m["disease"] = *mci.disease;
            }
            p["mci_events"].push_back(m);
        }
        doc["populations"].push_back(p);
    }
    doc["hospitals"] = ordered_json::array();
    for (const HospitalConfig& hospital : cfg.hospitals) {
        ordered_json h;
        h["id"] = hospital.id;
        h["it_node"] = hospital.it_node;
        h["referral_partners"] = hospital.referral_partners;
        h["referral_enabled"] = hospital.referral_enabled;
        ordered_json services = ordered_json::object();
        for (const auto& [level, service] : hospital.services) {
            ordered_json s;
            s["enabled"] = service.enabled;
            if (service.capacity) {
                s["capacity"] = *service.capacity;
            } else {
                s["capacity"] = nullptr;
            }
            services[std::string(to_token(level))] = s;
        }
        h["services"] = services;
        doc["hospitals"].push_back(h);
    }
    doc["it_nodes"] = ordered_json::array();
    for (const ItNodeConfig& node : cfg.it_nodes) {
        doc["it_nodes"].push_back({{"id", node.id},
                                   {"service_capacity", node.service_capacity},
                                   {"vulnerability", node.vulnerability},
                                   {"recovery_capacity", node.recovery_capacity},
                                   {"depends_on", node.depends_on}});
    }
    doc["attackers"] = ordered_json::array();
    for (const AttackerConfig& attacker : cfg.attackers) {
        ordered_json a;
        a["id"] = attacker.id;
        a["threat_level"] = attacker.threat_level;
        a["campaign"] = ordered_json::array();
        for (const AttackEventConfig& event : attacker.campaign) {
            a["campaign"].push_back(event_json(event));
        }
        doc["attackers"].push_back(a);
    }
    if (!cfg.contact_matrix.empty()) {
        ordered_json matrix = ordered_json::object();
        for (const auto& [row_id, row] : cfg.contact_matrix) {
            ordered_json r = ordered_json::object();
            for (const auto& [col_id, weight] : row) {
                r[col_id] = weight;
            }
            matrix[row_id] = r;
        }
        doc["contact_matrix"] = matrix;
    }
    return doc.dump(2) + "\n";
}

const std::vector<std::string>& countermeasure_labels() {
    static const std::vector<std::string> labels = {
        "baseline",    "lowBeds", "highBeds", "lowSecurity",
        "highSecurity", "mHealth", "referral"};
    return labels;
}

ScenarioConfig apply_countermeasure(const ScenarioConfig& base,
                                    std::string_view label) {
    ScenarioConfig cfg = base;
    const auto scale_beds = [&cfg](double factor) {
        for (HospitalConfig& hospital : cfg.hospitals) {
            for (const CareLevel level :
                 {CareLevel::general_bed, CareLevel::icu}) {
                const auto it = hospital.services.find(level);
                if (it != hospital.services.end() && it->second.capacity) {
                    it->second.capacity = static_cast<long long>(
                        std::ceil(static_cast<double>(*it->second.capacity) * factor));
                }
            }
        }
    };
    if (label == "baseline") {
        return cfg;
    }
    if (label == "lowBeds") {
        scale_beds(1.5);
        return cfg;
    }
    if (label == "highBeds") {
        scale_beds(2.0);
        return cfg;
    }
    if (label == "lowSecurity") {
        cfg.countermeasures.recovery_days_override = 15.0;
        return cfg;
    }
    if (label == "highSecurity") {
        cfg.countermeasures.recovery_days_override = 1.0;
        return cfg;
    }
    if (label == "mHealth") {
        for (HospitalConfig& hospital : cfg.hospitals) {
            hospital.services[CareLevel::mhealth].enabled = true;
        }
        return cfg;
    }
    if (label == "referral") {
        for (HospitalConfig& hospital : cfg.hospitals) {
            hospital.referral_enabled = true;
        }
        return cfg;
    }
    fail("countermeasure", "unknown countermeasure '" + std::string(label) + "'");
}

std::vector<RiskCell> expand_risk_grid(const std::string& scenario_text,
                                       const std::string& risks_text) {
    json base;
    try {
        base = json::parse(scenario_text);
    } catch (const json::parse_error& e) {
        fail("", std::string("scenario is not valid JSON: ") + e.what());
    }
    json risks;
    try {
        risks = json::parse(risks_text);
    } catch (const json::parse_error& e) {
        fail("", std::string("risks file is not valid JSON: ") + e.what());
    }
    if (!risks.is_object() || !risks.contains("axes") || !risks["axes"].is_array() ||
        risks["axes"].empty()) {
        fail("axes", "risks file must declare a non-empty 'axes' array");
    }
    const json& axes = risks["axes"];
    std::vector<std::size_t> option_counts;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        const std::string path = "axes[" + std::to_string(a) + "]";
        if (!axes[a].is_object() || !axes[a].contains("options") ||
            !axes[a]["options"].is_array() || axes[a]["options"].empty()) {
            fail(path, "axis must declare a non-empty 'options' array");
        }
        for (std::size_t o = 0; o < axes[a]["options"].size(); ++o) {
            const json& option = axes[a]["options"][o];
            if (!option.is_object() || !option.contains("label") ||
                !option["label"].is_string()) {
                fail(path + ".options[" + std::to_string(o) + "]",
                     "option must carry a string 'label'");
            }
        }
        option_counts.push_back(axes[a]["options"].size());
    }

    std::vector<RiskCell> cells;
    std::vector<std::size_t> choice(axes.size(), 0);
    for (;;) {
        json doc = base;
        std::string label;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const json& option = axes[a]["options"][choice[a]];
            if (!label.empty()) {
                label += "_";
            }
            label += option["label"].get<std::string>();
            if (option.contains("patch")) {
                try {
                    doc = doc.patch(option["patch"]);
                } catch (const json::exception& e) {
                    throw ConfigError(
                        {{"axes[" + std::to_string(a) + "].options[" +
                              std::to_string(choice[a]) + "].patch",
                          std::string("cannot apply patch for '") + label +
                              "': " + e.what()}});
                }
            }
        }
        try {
            cells.push_back({label, parse_scenario(doc.dump())});
        } catch (const ConfigError& e) {
            std::vector<Diagnostic> diagnostics = e.diagnostics();
            for (Diagnostic& d : diagnostics) {
                d.path = "[" + label + "] " + d.path;
            }
            throw ConfigError(std::move(diagnostics));
        }
        // Cartesian product, last axis fastest.
        std::size_t a = axes.size();
        while (a > 0) {
            --a;
            if (++choice[a] < option_counts[a]) {
                break;
            }
            choice[a] = 0;
            if (a == 0) {
                return cells;
            }
        }
    }
}

}  // namespace resilsim
