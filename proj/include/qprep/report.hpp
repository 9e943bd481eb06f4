#pragma once

#include <string>

#include <json.hpp>

#include "qprep/prep.hpp"

namespace qprep {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Serialized PrepReport plus config echo, library version and wall-clock
/// time. Round-trips losslessly; amplitudes keep full double precision.
struct ReportFile {
    nlohmann::json config;
    std::string library_version = kLibraryVersion;
    double wall_time_seconds = 0.0;
    PrepReport report;
};

nlohmann::json report_to_json(const PrepReport& report);
PrepReport report_from_json(const nlohmann::json& j);

nlohmann::json report_file_to_json(const ReportFile& file);
ReportFile report_file_from_json(const nlohmann::json& j);

std::string serialize_report_file(const ReportFile& file);
ReportFile parse_report_file(const std::string& text);

/// Equality excluding the wall-clock field (the determinism contract).
bool report_files_equal_modulo_time(const ReportFile& a, const ReportFile& b);

} // namespace qprep
