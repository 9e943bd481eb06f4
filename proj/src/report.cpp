#include "qprep/report.hpp"

#include <stdexcept>

namespace qprep {

using nlohmann::json;

json report_to_json(const PrepReport& report) {
    return json{
        {"post_selected_amplitudes", report.post_selected_amplitudes},
        {"success_probability_raw", report.success_probability_raw},
        {"aa_rounds_used", report.aa_rounds_used},
        {"success_probability_final", report.success_probability_final},
        {"multiplication_count", report.multiplication_count},
        {"fidelity_vs_target", report.fidelity_vs_target},
        {"max_componentwise_error", report.max_componentwise_error},
    };
}

PrepReport report_from_json(const json& j) {
    PrepReport report;
    j.at("post_selected_amplitudes")
        .get_to(report.post_selected_amplitudes);
    j.at("success_probability_raw").get_to(report.success_probability_raw);
    j.at("aa_rounds_used").get_to(report.aa_rounds_used);
    j.at("success_probability_final")
        .get_to(report.success_probability_final);
    j.at("multiplication_count").get_to(report.multiplication_count);
    j.at("fidelity_vs_target").get_to(report.fidelity_vs_target);
    j.at("max_componentwise_error").get_to(report.max_componentwise_error);
    return report;
}

json report_file_to_json(const ReportFile& file) {
    return json{
        {"config", file.config},
        {"library_version", file.library_version},
        {"wall_time_seconds", file.wall_time_seconds},
        {"report", report_to_json(file.report)},
    };
}

ReportFile report_file_from_json(const json& j) {
    ReportFile file;
    file.config = j.at("config");
    j.at("library_version").get_to(file.library_version);
    j.at("wall_time_seconds").get_to(file.wall_time_seconds);
    file.report = report_from_json(j.at("report"));
    return file;
}

std::string serialize_report_file(const ReportFile& file) {
    return report_file_to_json(file).dump(2) + "\n";
}

ReportFile parse_report_file(const std::string& text) {
    return report_file_from_json(json::parse(text));
}

bool report_files_equal_modulo_time(const ReportFile& a, const ReportFile& b) {
    json ja = report_file_to_json(a);
    json jb = report_file_to_json(b);
    ja.erase("wall_time_seconds");
    jb.erase("wall_time_seconds");
    return ja == jb;
}

} // namespace qprep
