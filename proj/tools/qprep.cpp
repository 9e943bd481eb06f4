// Command-line driver: load data, run a preparation, emit a JSON report or
// a CSV sweep over m.
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qprep/prep.hpp"
#include "qprep/report.hpp"
#include "qprep/resources.hpp"

namespace {

using nlohmann::json;

struct Columns {
    std::vector<std::uint64_t> first;
    std::vector<std::uint64_t> second; // empty unless the file has two columns
};

Columns load_integer_columns(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open data file: " + path);
    }
    Columns cols;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        for (char& ch : line) {
            if (ch == ',') {
                ch = ' ';
            }
        }
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue; // blank line
        }
        std::istringstream ss(line);
        std::uint64_t a = 0;
        if (!(ss >> a)) {
            throw std::invalid_argument("data file " + path + " line " +
                                        std::to_string(lineno) +
                                        ": expected an integer");
        }
        cols.first.push_back(a);
        std::uint64_t b = 0;
        if (ss >> b) {
            cols.second.push_back(b);
        }
        std::string trailing;
        if (ss >> trailing) {
            throw std::invalid_argument("data file " + path + " line " +
                                        std::to_string(lineno) +
                                        ": too many columns");
        }
    }
    if (cols.first.empty()) {
        throw std::invalid_argument("data file " + path + " holds no values");
    }
    if (!cols.second.empty() && cols.second.size() != cols.first.size()) {
        throw std::invalid_argument(
            "data file " + path +
            ": second column must be present on every line or none");
    }
    return cols;
}

std::vector<double> load_f_table(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open table file: " + path);
    }
    const std::size_t size = std::size_t{1} << n;
    std::vector<double> f(size, -1.0);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        for (char& ch : line) {
            if (ch == ',') {
                ch = ' ';
            }
        }
        std::istringstream ss(line);
        std::uint64_t label = 0;
        double value = 0.0;
        if (!(ss >> label)) {
            continue; // blank line
        }
        if (!(ss >> value) || label >= size) {
            throw std::invalid_argument("table file " + path + " line " +
                                        std::to_string(lineno) +
                                        ": expected 'label value' with label < 2^n");
        }
        f[label] = value;
    }
    for (std::size_t a = 0; a < size; ++a) {
        if (f[a] < 0.0) {
            throw std::invalid_argument("table file " + path +
                                        ": missing value for label " +
                                        std::to_string(a));
        }
    }
    return f;
}

int bits_needed(std::uint64_t max_value) {
    int n = 1;
    while ((std::uint64_t{1} << n) <= max_value) {
        ++n;
    }
    return n;
}

std::optional<int> parse_aa(const std::string& aa) {
    if (aa == "auto") {
        return std::nullopt;
    }
    std::size_t pos = 0;
    const int rounds = std::stoi(aa, &pos);
    if (pos != aa.size() || rounds < 0) {
        throw std::invalid_argument("--aa must be 'auto' or a nonnegative integer");
    }
    return rounds;
}

std::vector<int> parse_sweep(const std::string& sweep) {
    std::vector<int> grid;
    if (sweep.empty() || sweep == "m=") {
        return grid;
    }
    if (sweep.rfind("m=", 0) != 0) {
        throw std::invalid_argument("--sweep expects the form m=LO:HI or m=a,b,c");
    }
    const std::string body = sweep.substr(2);
    if (const auto colon = body.find(':'); colon != std::string::npos) {
        const int lo = std::stoi(body.substr(0, colon));
        const int hi = std::stoi(body.substr(colon + 1));
        if (lo < 1 || hi < lo) {
            throw std::invalid_argument("--sweep range must satisfy 1 <= LO <= HI");
        }
        for (int m = lo; m <= hi; ++m) {
            grid.push_back(m);
        }
        return grid;
    }
    std::istringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const int m = std::stoi(tok);
        if (m < 1) {
            throw std::invalid_argument("--sweep entries must be >= 1");
        }
        grid.push_back(m);
    }
    return grid;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + out_path);
    }
    out << text;
}

json cost_to_json(const qprep::CostModel& cost) {
    return json{{"multiplications", cost.multiplications},
                {"extra_qubit_factor", cost.extra_qubit_factor},
                {"aa_rounds", cost.aa_rounds}};
}

struct Options {
    std::string mode;
    std::string data_path;
    std::uint64_t c = 1;
    std::vector<std::uint64_t> betas;
    int m = 4;
    int n = 0; // 0 = derive from the data
    std::string aa = "auto";
    std::string backend = "dense";
    std::string out_path;
    std::string sweep;
    std::uint64_t d = 0;
    std::string f_name = "inv_sqrt_1p";
    double epsilon = 0.0;
};

int run(const Options& opt) {
    const auto started = std::chrono::steady_clock::now();

    if (opt.mode == "estimate") {
        if (!(opt.epsilon > 0.0)) {
            throw std::invalid_argument("estimate mode requires --epsilon > 0");
        }
        json out{{"inequality", cost_to_json(qprep::cost_inequality_method())},
                 {"newton", cost_to_json(qprep::cost_newton_raphson(opt.epsilon))}};
        write_output(opt.out_path, out.dump(2) + "\n");
        return 0;
    }

    if (opt.mode == "uniform") {
        if (opt.d == 0) {
            throw std::invalid_argument("uniform mode requires --d >= 1");
        }
        const qprep::PrepResult result = qprep::prepare_uniform(opt.d);
        qprep::ReportFile file;
        file.config = json{{"mode", "uniform"}, {"d", opt.d}};
        file.report = result.report;
        file.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          started)
                .count();
        write_output(opt.out_path, qprep::serialize_report_file(file));
        return 0;
    }

    if (opt.data_path.empty()) {
        throw std::invalid_argument(opt.mode + " mode requires --data");
    }
    const Columns cols = load_integer_columns(opt.data_path);
    const bool general = opt.mode == "general";
    std::uint64_t max_value = 0;
    for (std::uint64_t a : cols.first) {
        max_value = std::max(max_value, a);
    }
    const int n = opt.n > 0 ? opt.n : bits_needed(std::max<std::uint64_t>(max_value, 1));
    const qprep::Backend backend = opt.backend == "block"
                                       ? qprep::Backend::kBlock
                                       : qprep::Backend::kDense;
    const std::optional<int> aa = parse_aa(opt.aa);

    std::vector<double> f_file_values;
    if (general && opt.f_name != "inv_sqrt_1p") {
        f_file_values = load_f_table(opt.f_name, n);
    }

    const auto run_once = [&](int m) -> qprep::PrepResult {
        qprep::OracleData data(cols.first, n, /*allow_zero=*/general);
        if (opt.mode == "inverse") {
            return qprep::prepare_inverse({data, opt.c, m, aa, backend});
        }
        if (opt.mode == "division") {
            std::vector<std::uint64_t> betas =
                opt.betas.empty() ? cols.second : opt.betas;
            if (betas.empty()) {
                throw std::invalid_argument(
                    "division mode requires a second data column of betas");
            }
            return qprep::prepare_division(data, betas, m, aa, backend);
        }
        const qprep::FunctionTablePair tables =
            f_file_values.empty()
                ? qprep::make_inv_sqrt_1p_tables(n, m)
                : qprep::make_threshold_tables(f_file_values, m);
        return qprep::prepare_general(data, tables, aa, backend);
    };

    if (!opt.sweep.empty()) {
        const std::vector<int> grid = parse_sweep(opt.sweep);
        std::ostringstream csv;
        csv << "mode,d,n,C,m,max_componentwise_error,fidelity,p_raw,rounds\n";
        csv.precision(17);
        for (int m : grid) {
            const qprep::PrepResult result = run_once(m);
            const std::uint64_t c_col = opt.mode == "inverse" ? opt.c : 0;
            csv << opt.mode << ',' << cols.first.size() << ',' << n << ','
                << c_col << ',' << m << ','
                << result.report.max_componentwise_error << ','
                << result.report.fidelity_vs_target << ','
                << result.report.success_probability_raw << ','
                << result.report.aa_rounds_used << '\n';
        }
        write_output(opt.out_path, csv.str());
        return 0;
    }

    const qprep::PrepResult result = run_once(opt.m);
    qprep::ReportFile file;
    file.config = json{{"mode", opt.mode},
                       {"data", cols.first},
                       {"n", n},
                       {"m", opt.m},
                       {"aa", opt.aa},
                       {"backend", opt.backend}};
    if (opt.mode == "inverse") {
        file.config["c"] = opt.c;
    } else if (opt.mode == "division") {
        file.config["betas"] = opt.betas.empty() ? cols.second : opt.betas;
    } else {
        file.config["f"] = opt.f_name;
    }
    file.report = result.report;
    file.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    write_output(opt.out_path, qprep::serialize_report_file(file));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact simulator for black-box state preparation via "
                 "inequality tests"};
    Options opt;
    app.add_option("--mode", opt.mode,
                   "inverse | division | general | uniform | estimate")
        ->required()
        ->check(CLI::IsMember(
            {"inverse", "division", "general", "uniform", "estimate"}));
    app.add_option("--data", opt.data_path,
                   "data file: one integer per line; division mode takes "
                   "betas as a second column");
    app.add_option("--const-c", opt.c, "normalization constant C (inverse mode)");
    app.add_option("--beta", opt.betas,
                   "division numerators (overrides the data file's second column)");
    app.add_option("--m", opt.m, "grid precision bits")->check(CLI::Range(1, 24));
    app.add_option("--n", opt.n, "data bit width (default: fit the data)")
        ->check(CLI::Range(1, 16));
    app.add_option("--aa", opt.aa, "amplification rounds: auto or an integer");
    app.add_option("--backend", opt.backend, "dense | block")
        ->check(CLI::IsMember({"dense", "block"}));
    app.add_option("--out", opt.out_path, "output path (default: stdout)");
    app.add_option("--sweep", opt.sweep,
                   "CSV sweep over m: 'm=LO:HI' or 'm=a,b,c'");
    app.add_option("--d", opt.d, "dimension (uniform mode)");
    app.add_option("--f", opt.f_name,
                   "general mode: builtin 'inv_sqrt_1p' or a label,value file");
    app.add_option("--epsilon", opt.epsilon,
                   "target precision (estimate mode)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return run(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    }
}
