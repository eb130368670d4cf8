#include "io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

namespace tradeoff::cli {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == sep && !quoted) {
            out.push_back(trim(cell));
            cell.clear();
        } else {
            cell += ch;
        }
    }
    out.push_back(trim(cell));
    return out;
}

struct RowError {
    int line;
    std::string where(const std::string& msg) const { return "line " + std::to_string(line) + ": " + msg; }
};

double number(const std::string& cell, const std::string& column, const RowError& at) {
    if (cell.empty()) throw ValidationError(at.where("column " + column + " is empty"));
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || errno == ERANGE || !std::isfinite(v))
        throw ValidationError(at.where("column " + column + " is not a finite number: '" + cell + "'"));
    return v;
}

int count(const std::string& cell, const std::string& column, const RowError& at) {
    double v = number(cell, column, at);
    if (v != std::floor(v) || v < 0 || v > 1e9)
        throw ValidationError(at.where("column " + column + " must be a non-negative integer"));
    return static_cast<int>(v);
}

std::vector<double> list(const std::string& cell, const std::string& column, const RowError& at) {
    std::vector<double> out;
    for (const auto& part : split(cell, ';')) out.push_back(number(part, column, at));
    return out;
}

template <class Fn>
auto guarded(const RowError& at, Fn fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(at.where(e.what()));
    }
}

Option lottery_from(const std::vector<std::string>& row, std::size_t pay, std::size_t prob,
                    const std::vector<std::string>& header, const RowError& at) {
    auto w = list(row[pay], header[pay], at);
    auto p = list(row[prob], header[prob], at);
    if (w.size() != p.size()) throw ValidationError(at.where(header[pay] + " and " + header[prob] + " differ in length"));
    for (double q : p)
        if (q < 0.0 || q > 1.0) throw ValidationError(at.where("column " + header[prob] + " has a probability outside [0,1]"));
    std::vector<Outcome> o;
    for (std::size_t i = 0; i < w.size(); ++i) o.push_back({w[i], p[i]});
    return guarded(at, [&] { return Option(Lottery(std::move(o))); });
}

Option flow_from(const std::vector<std::string>& row, std::size_t amt, std::size_t del,
                 const std::vector<std::string>& header, const RowError& at) {
    auto m = list(row[amt], header[amt], at);
    auto t = list(row[del], header[del], at);
    if (m.size() != t.size()) throw ValidationError(at.where(header[amt] + " and " + header[del] + " differ in length"));
    std::vector<Payment> pay;
    for (std::size_t i = 0; i < m.size(); ++i) pay.push_back({t[i], m[i]});
    return guarded(at, [&] { return Option(PayoffFlow(std::move(pay))); });
}

std::vector<std::string> expected_header(Domain d, std::size_t columns) {
    std::vector<std::string> h{"problem_id", "n_trials", "n_chose_a"};
    switch (d) {
        case Domain::Multiattribute: {
            std::size_t k = columns > 3 ? (columns - 3) / 2 : 0;
            for (const char* side : {"a_", "b_"})
                for (std::size_t i = 1; i <= k; ++i) h.push_back(side + std::to_string(i));
            break;
        }
        case Domain::Lottery:
            h.insert(h.end(), {"a_payoffs", "a_probs", "b_payoffs", "b_probs"});
            break;
        case Domain::Intertemporal:
            h.insert(h.end(), {"a_amounts", "a_delays_days", "b_amounts", "b_delays_days"});
            break;
    }
    return h;
}

}  // namespace

Domain parse_domain(const std::string& name) {
    if (name == "multiattribute") return Domain::Multiattribute;
    if (name == "lottery") return Domain::Lottery;
    if (name == "temporal") return Domain::Intertemporal;
    throw ValidationError("unknown domain '" + name + "' (multiattribute, lottery, temporal)");
}

Dataset parse_dataset(std::istream& in, Domain domain) {
    std::string line;
    int line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty() || line[0] == '#') continue;
        header = split(line, ',');
        break;
    }
    if (header.empty()) throw ValidationError("dataset has no header row");
    auto want = expected_header(domain, header.size());
    if (header != want || (domain == Domain::Multiattribute && (header.size() < 7 || header.size() % 2 == 0))) {
        std::string w;
        for (const auto& c : want) w += (w.empty() ? "" : ",") + c;
        throw ValidationError("line " + std::to_string(line_no) + ": header does not match the " +
                              domain_name(domain) + " schema (" +
                              (domain == Domain::Multiattribute ? "problem_id,n_trials,n_chose_a,a_1..a_k,b_1..b_k" : w) +
                              ")");
    }

    Dataset out;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || line[0] == '#') continue;
        RowError at{line_no};
        auto row = split(line, ',');
        if (row.size() != header.size())
            throw ValidationError(at.where("expected " + std::to_string(header.size()) + " columns, found " +
                                           std::to_string(row.size())));
        if (row[0].empty()) throw ValidationError(at.where("problem_id is empty"));
        int n = count(row[1], header[1], at);
        int k = count(row[2], header[2], at);
        Option a = AttributeVector({0.0, 0.0}), b = a;
        if (domain == Domain::Multiattribute) {
            std::size_t dim = (header.size() - 3) / 2;
            std::vector<double> xa, xb;
            for (std::size_t i = 0; i < dim; ++i) {
                xa.push_back(number(row[3 + i], header[3 + i], at));
                xb.push_back(number(row[3 + dim + i], header[3 + dim + i], at));
            }
            a = AttributeVector(xa);
            b = AttributeVector(xb);
        } else if (domain == Domain::Lottery) {
            a = lottery_from(row, 3, 4, header, at);
            b = lottery_from(row, 5, 6, header, at);
        } else {
            a = flow_from(row, 3, 4, header, at);
            b = flow_from(row, 5, 6, header, at);
        }
        guarded(at, [&] {
            out.data.emplace_back(std::move(a), std::move(b), n, k);
            return 0;
        });
        out.ids.push_back(row[0]);
    }
    if (out.data.empty()) throw ValidationError("dataset has no problem rows");
    return out;
}

Dataset read_dataset(const std::string& path, Domain domain) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file: " + path);
    try {
        return parse_dataset(in, domain);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ValidationError("config " + path + " must be a JSON object");
    return j;
}

std::string config_hash(const json& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json metadata(const json& config, std::uint64_t seed) {
    return {{"engine", kEngineVersion}, {"seed", seed}, {"config_hash", config_hash(config)}, {"config", config}};
}

std::string metadata_line(const json& config, std::uint64_t seed) { return "# " + metadata(config, seed).dump(); }

json parse_metadata_line(const std::string& line) {
    if (line.rfind("# ", 0) != 0) throw ValidationError("metadata line must start with '# '");
    return json::parse(line.substr(2));
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write output file: " + path);
        out << content;
        out.flush();
        if (!out) throw ValidationError("failed writing output file: " + path);
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw ValidationError("cannot move output into place: " + path + " (" + ec.message() + ")");
    }
}

}  // namespace tradeoff::cli
