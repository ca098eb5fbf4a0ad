#include "frogsel/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace frogsel {
namespace {

using Row = std::vector<std::string>;

constexpr const char* kMissing = "?";

bool is_missing(const std::string& cell) { return cell.empty() || cell == kMissing; }

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || errno == ERANGE) return false;
    while (*end == ' ' || *end == '\t') ++end;
    if (*end != '\0') return false;
    if (!std::isfinite(v)) return false;
    out = v;
    return true;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// RFC-4180 record parsing: quoted fields, doubled quotes, newlines inside
// quotes, and either LF or CRLF terminators.
std::vector<Row> parse_csv(const std::string& text, const std::string& path) {
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        row.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty()) throw TableError(path + ": stray quote inside unquoted field");
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                break;
            default:
                field += c;
                field_started = true;
                break;
        }
    }
    if (in_quotes) throw TableError(path + ": unterminated quoted field");
    if (field_started || !field.empty() || !row.empty()) end_row();
    return rows;
}

struct RawColumn {
    std::string name;
    std::vector<std::string> cells;
    bool declared_nominal = false;          // ARFF {...} attribute
    std::vector<std::string> declared_symbols;
};

struct RawTable {
    std::string name;
    std::vector<RawColumn> columns;
};

RawTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TableError(path + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    const auto rows = parse_csv(buf.str(), path);
    if (rows.size() < 2) throw TableError(path + ": need a header row and at least one data row");

    RawTable out;
    out.name = std::filesystem::path(path).stem().string();
    const Row& header = rows.front();
    if (header.size() < 2) throw TableError(path + ": need at least one feature column plus a decision column");
    out.columns.resize(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) out.columns[c].name = trim(header[c]);

    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != header.size())
            throw TableError(path + ": row " + std::to_string(r + 1) + " has " +
                             std::to_string(rows[r].size()) + " cells, expected " +
                             std::to_string(header.size()));
        for (std::size_t c = 0; c < header.size(); ++c)
            out.columns[c].cells.push_back(trim(rows[r][c]));
    }
    return out;
}

std::string strip_arff_quotes(std::string s) {
    s = trim(std::move(s));
    if (s.size() >= 2 && ((s.front() == '\'' && s.back() == '\'') || (s.front() == '"' && s.back() == '"')))
        return s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    char quote = 0;
    for (char c : line) {
        if (quoted) {
            if (c == quote) quoted = false;
            else field += c;
            continue;
        }
        if (c == '\'' || c == '"') {
            quoted = true;
            quote = c;
        } else if (c == ',') {
            out.push_back(trim(field));
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(trim(field));
    return out;
}

RawTable read_arff_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TableError(path + ": cannot open file");

    RawTable out;
    out.name = std::filesystem::path(path).stem().string();
    bool in_data = false;
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '%') continue;

        if (!in_data) {
            const std::string low = lower(stripped);
            if (low.rfind("@relation", 0) == 0) {
                out.name = strip_arff_quotes(stripped.substr(9));
            } else if (low.rfind("@attribute", 0) == 0) {
                std::string rest = trim(stripped.substr(10));
                std::string name;
                if (!rest.empty() && (rest[0] == '\'' || rest[0] == '"')) {
                    const char q = rest[0];
                    const auto close = rest.find(q, 1);
                    if (close == std::string::npos)
                        throw TableError(path + ":" + std::to_string(lineno) + ": unterminated attribute name");
                    name = rest.substr(1, close - 1);
                    rest = trim(rest.substr(close + 1));
                } else {
                    const auto sp = rest.find_first_of(" \t");
                    if (sp == std::string::npos)
                        throw TableError(path + ":" + std::to_string(lineno) + ": attribute without a type");
                    name = rest.substr(0, sp);
                    rest = trim(rest.substr(sp));
                }
                RawColumn col;
                col.name = name;
                const std::string type = lower(rest);
                if (type == "numeric" || type == "real" || type == "integer") {
                    col.declared_nominal = false;
                } else if (!rest.empty() && rest.front() == '{' && rest.back() == '}') {
                    col.declared_nominal = true;
                    for (auto& sym : split_commas(rest.substr(1, rest.size() - 2)))
                        col.declared_symbols.push_back(strip_arff_quotes(sym));
                    if (col.declared_symbols.empty())
                        throw TableError(path + ":" + std::to_string(lineno) + ": empty nominal domain");
                } else {
                    throw TableError(path + ":" + std::to_string(lineno) +
                                     ": unsupported attribute type '" + rest + "'");
                }
                out.columns.push_back(std::move(col));
            } else if (low.rfind("@data", 0) == 0) {
                if (out.columns.size() < 2)
                    throw TableError(path + ": need at least two attributes before @data");
                in_data = true;
            }
            continue;
        }

        if (stripped[0] == '{') throw TableError(path + ": sparse ARFF rows are not supported");
        auto cells = split_commas(stripped);
        if (cells.size() != out.columns.size())
            throw TableError(path + ":" + std::to_string(lineno) + ": row has " +
                             std::to_string(cells.size()) + " values, expected " +
                             std::to_string(out.columns.size()));
        for (std::size_t c = 0; c < cells.size(); ++c)
            out.columns[c].cells.push_back(strip_arff_quotes(cells[c]));
    }
    if (!in_data) throw TableError(path + ": missing @data section");
    if (out.columns.empty() || out.columns[0].cells.empty())
        throw TableError(path + ": empty table");
    return out;
}

std::size_t pick_decision_column(const RawTable& raw, const LoadOptions& options,
                                 TableFormat format, const std::string& path) {
    if (!options.class_column.empty()) {
        for (std::size_t c = 0; c < raw.columns.size(); ++c)
            if (raw.columns[c].name == options.class_column) return c;
        // Fall back to a 0-based index.
        std::size_t idx = 0;
        const auto& s = options.class_column;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), idx);
        if (ec == std::errc() && p == s.data() + s.size() && idx < raw.columns.size()) return idx;
        throw TableError(path + ": decision column '" + options.class_column + "' not found");
    }
    if (format == TableFormat::Arff) {
        for (std::size_t c = 0; c < raw.columns.size(); ++c)
            if (lower(raw.columns[c].name) == "class") return c;
    }
    return raw.columns.size() - 1;
}

void resolve_missing(RawColumn& col, bool as_real, MissingPolicy policy, const std::string& path) {
    std::vector<std::size_t> holes;
    for (std::size_t r = 0; r < col.cells.size(); ++r)
        if (is_missing(col.cells[r])) holes.push_back(r);
    if (holes.empty()) return;
    if (policy == MissingPolicy::Reject)
        throw TableError(path + ": missing value in column '" + col.name + "' row " +
                         std::to_string(holes.front() + 1) +
                         " (policy=reject; rerun with impute to fill)");

    if (as_real) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& cell : col.cells) {
            double v;
            if (!is_missing(cell) && parse_double(cell, v)) {
                sum += v;
                ++n;
            }
        }
        if (n == 0) throw TableError(path + ": column '" + col.name + "' has no usable values");
        std::ostringstream mean;
        mean.precision(17);
        mean << sum / static_cast<double>(n);
        for (auto r : holes) col.cells[r] = mean.str();
    } else {
        std::map<std::string, std::size_t> freq;  // ordered: ties pick the smallest symbol
        for (const auto& cell : col.cells)
            if (!is_missing(cell)) ++freq[cell];
        if (freq.empty()) throw TableError(path + ": column '" + col.name + "' has no usable values");
        std::string mode = freq.begin()->first;
        std::size_t best = freq.begin()->second;
        for (const auto& [sym, n] : freq)
            if (n > best) {
                best = n;
                mode = sym;
            }
        for (auto r : holes) col.cells[r] = mode;
    }
}

bool column_parses_real(const RawColumn& col) {
    double v;
    for (const auto& cell : col.cells)
        if (!is_missing(cell) && !parse_double(cell, v)) return false;
    return true;
}

bool integer_column_below_threshold(const RawColumn& col, int threshold) {
    std::unordered_set<long long> distinct;
    for (const auto& cell : col.cells) {
        if (is_missing(cell)) continue;
        double v;
        if (!parse_double(cell, v)) return false;
        if (v != std::floor(v)) return false;
        distinct.insert(static_cast<long long>(v));
        if (distinct.size() > static_cast<std::size_t>(threshold)) return false;
    }
    return true;
}

FeatureColumn build_feature(const RawColumn& col, bool as_real) {
    FeatureColumn out;
    out.name = col.name;
    if (as_real) {
        out.kind = FeatureKind::Real;
        out.reals.reserve(col.cells.size());
        for (const auto& cell : col.cells) {
            double v = 0.0;
            parse_double(cell, v);
            out.reals.push_back(v);
        }
    } else {
        out.kind = FeatureKind::Nominal;
        std::unordered_map<std::string, std::int32_t> index;
        if (col.declared_nominal) {
            for (const auto& sym : col.declared_symbols) {
                index.emplace(sym, static_cast<std::int32_t>(out.symbols.size()));
                out.symbols.push_back(sym);
            }
        }
        out.codes.reserve(col.cells.size());
        for (const auto& cell : col.cells) {
            auto it = index.find(cell);
            if (it == index.end()) {
                if (col.declared_nominal)
                    throw TableError("value '" + cell + "' not in the declared domain of '" + col.name + "'");
                it = index.emplace(cell, static_cast<std::int32_t>(out.symbols.size())).first;
                out.symbols.push_back(cell);
            }
            out.codes.push_back(it->second);
        }
    }
    return out;
}

DecisionColumn build_decision(const RawColumn& col) {
    DecisionColumn out;
    out.name = col.name;
    std::unordered_map<std::string, std::int32_t> index;
    if (col.declared_nominal) {
        for (const auto& sym : col.declared_symbols) {
            index.emplace(sym, static_cast<std::int32_t>(out.classes.size()));
            out.classes.push_back(sym);
        }
    }
    out.labels.reserve(col.cells.size());
    for (const auto& cell : col.cells) {
        auto it = index.find(cell);
        if (it == index.end()) {
            if (col.declared_nominal)
                throw TableError("class label '" + cell + "' not in the declared domain");
            it = index.emplace(cell, static_cast<std::int32_t>(out.classes.size())).first;
            out.classes.push_back(cell);
        }
        out.labels.push_back(it->second);
    }
    return out;
}

}  // namespace

double compute_sigma(std::span<const double> values, SigmaMode mode) {
    if (values.empty()) throw TableError("compute_sigma: empty column");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    return mode == SigmaMode::Variance ? var : std::sqrt(var);
}

DecisionTable DecisionTable::make(std::string name, std::vector<FeatureColumn> features,
                                  DecisionColumn decision, SigmaMode sigma_mode, bool normalize) {
    if (features.empty()) throw TableError(name + ": need at least one conditional feature");
    const std::size_t n = decision.labels.size();
    if (n == 0) throw TableError(name + ": empty table");
    if (decision.classes.empty()) throw TableError(name + ": empty class label set");
    for (auto label : decision.labels)
        if (label < 0 || static_cast<std::size_t>(label) >= decision.classes.size())
            throw TableError(name + ": class label out of range");
    for (auto& col : features) {
        if (col.size() != n)
            throw TableError(name + ": column '" + col.name + "' has " + std::to_string(col.size()) +
                             " entries, expected " + std::to_string(n));
        if (col.kind == FeatureKind::Real) {
            for (double v : col.reals)
                if (!std::isfinite(v)) throw TableError(name + ": non-finite value in '" + col.name + "'");
        } else {
            for (auto code : col.codes)
                if (code < 0 || static_cast<std::size_t>(code) >= col.symbols.size())
                    throw TableError(name + ": symbol index out of range in '" + col.name + "'");
        }
    }

    if (normalize) {
        for (auto& col : features) {
            if (col.kind != FeatureKind::Real) continue;
            const auto [mn, mx] = std::minmax_element(col.reals.begin(), col.reals.end());
            const double lo = *mn, hi = *mx;
            if (hi > lo) {
                for (double& v : col.reals) v = (v - lo) / (hi - lo);
            } else {
                for (double& v : col.reals) v = 0.0;
            }
        }
    }
    for (auto& col : features)
        if (col.kind == FeatureKind::Real) col.sigma = compute_sigma(col.reals, sigma_mode);

    DecisionTable t;
    t.name_ = std::move(name);
    t.objects_ = n;
    t.features_ = std::move(features);
    t.decision_ = std::move(decision);
    t.sigma_mode_ = sigma_mode;
    t.normalized_ = normalize;
    return t;
}

TableFormat infer_format(const std::string& path) {
    const std::string ext = lower(std::filesystem::path(path).extension().string());
    if (ext == ".arff") return TableFormat::Arff;
    if (ext == ".csv" || ext == ".data" || ext == ".txt") return TableFormat::Csv;
    throw TableError(path + ": cannot infer table format from extension; pass it explicitly");
}

DecisionTable load_table(const std::string& path, TableFormat format, const LoadOptions& options) {
    RawTable raw = format == TableFormat::Csv ? read_csv_file(path) : read_arff_file(path);
    if (raw.columns.size() < 2) throw TableError(path + ": need a feature column plus a decision column");

    const std::size_t decision_idx = pick_decision_column(raw, options, format, path);

    std::vector<FeatureColumn> features;
    features.reserve(raw.columns.size() - 1);
    for (std::size_t c = 0; c < raw.columns.size(); ++c) {
        if (c == decision_idx) continue;
        RawColumn& col = raw.columns[c];
        bool as_real;
        if (format == TableFormat::Arff) {
            as_real = !col.declared_nominal;
        } else {
            as_real = column_parses_real(col);
            if (as_real && options.integer_columns_nominal &&
                integer_column_below_threshold(col, options.nominal_threshold))
                as_real = false;
        }
        resolve_missing(col, as_real, options.missing, path);
        features.push_back(build_feature(col, as_real));
    }

    RawColumn& dcol = raw.columns[decision_idx];
    resolve_missing(dcol, false, options.missing, path);
    DecisionColumn decision = build_decision(dcol);

    return DecisionTable::make(raw.name, std::move(features), std::move(decision),
                               options.sigma_mode, options.normalize);
}

DecisionTable project(const DecisionTable& table, const Bitmask& mask) {
    if (mask.size() != table.feature_count())
        throw TableError("project: mask length " + std::to_string(mask.size()) + " does not match " +
                         std::to_string(table.feature_count()) + " features");
    if (mask.none()) throw TableError("project: empty mask");

    // Direct copy keeps values and sigma exactly as loaded; rebuilding
    // through make() would recompute sigma.
    std::vector<FeatureColumn> kept;
    for (std::size_t i = 0; i < table.feature_count(); ++i)
        if (mask.test(i)) kept.push_back(table.feature(i));

    DecisionTable out;
    out.name_ = table.name_;
    out.objects_ = table.objects_;
    out.features_ = std::move(kept);
    out.decision_ = table.decision_;
    out.sigma_mode_ = table.sigma_mode_;
    out.normalized_ = table.normalized_;
    return out;
}

std::string table_summary_json(const DecisionTable& table) {
    nlohmann::json j;
    j["name"] = table.name();
    j["objects"] = table.objects();
    j["features"] = table.feature_count();
    j["classes"] = table.decision().class_count();
    j["sigma_mode"] = to_string(table.sigma_mode());
    j["normalized"] = table.normalized();
    return j.dump(2);
}

const char* to_string(SigmaMode mode) {
    return mode == SigmaMode::Variance ? "variance" : "stddev";
}

const char* to_string(FeatureKind kind) {
    return kind == FeatureKind::Real ? "real" : "nominal";
}

}  // namespace frogsel
