#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "frogsel/bitmask.hpp"

namespace frogsel {

struct TableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FeatureKind { Real, Nominal };
enum class SigmaMode { Variance, StdDev };
enum class MissingPolicy { Reject, Impute };
enum class TableFormat { Csv, Arff };

struct LoadOptions {
    // Decision column: name, or numeric index string; empty selects the last
    // column (for ARFF an attribute named "class" takes precedence).
    std::string class_column;
    SigmaMode sigma_mode = SigmaMode::Variance;
    bool normalize = true;  // min-max scale real columns to [0,1] at load
    MissingPolicy missing = MissingPolicy::Reject;
    // CSV columns whose values all parse as integers with at most
    // nominal_threshold distinct values are treated as nominal only when
    // integer_columns_nominal is set; numeric parse wins otherwise.
    bool integer_columns_nominal = false;
    int nominal_threshold = 10;
};

struct FeatureColumn {
    std::string name;
    FeatureKind kind = FeatureKind::Real;
    std::vector<double> reals;         // kind == Real
    std::vector<std::int32_t> codes;   // kind == Nominal, index into symbols
    std::vector<std::string> symbols;  // nominal symbol table
    double sigma = 0.0;                // spread statistic for the similarity ramp

    std::size_t size() const {
        return kind == FeatureKind::Real ? reals.size() : codes.size();
    }
};

struct DecisionColumn {
    std::string name = "class";
    std::vector<std::int32_t> labels;  // index into classes
    std::vector<std::string> classes;

    std::size_t class_count() const { return classes.size(); }
};

// Objects described by conditional features plus one nominal decision.
// Immutable after construction; safe to share across threads.
class DecisionTable {
public:
    // Validates shape, optionally min-max normalizes real columns, and
    // computes sigma for every real column under the requested mode.
    static DecisionTable make(std::string name, std::vector<FeatureColumn> features,
                              DecisionColumn decision,
                              SigmaMode sigma_mode = SigmaMode::Variance,
                              bool normalize = false);

    const std::string& name() const { return name_; }
    std::size_t objects() const { return objects_; }
    std::size_t feature_count() const { return features_.size(); }
    const std::vector<FeatureColumn>& features() const { return features_; }
    const FeatureColumn& feature(std::size_t i) const { return features_.at(i); }
    const DecisionColumn& decision() const { return decision_; }
    SigmaMode sigma_mode() const { return sigma_mode_; }
    bool normalized() const { return normalized_; }

private:
    DecisionTable() = default;

    friend DecisionTable project(const DecisionTable& table, const Bitmask& mask);

    std::string name_;
    std::size_t objects_ = 0;
    std::vector<FeatureColumn> features_;
    DecisionColumn decision_;
    SigmaMode sigma_mode_ = SigmaMode::Variance;
    bool normalized_ = false;
};

// Population variance by default; standard deviation when requested.
double compute_sigma(std::span<const double> values, SigmaMode mode);

DecisionTable load_table(const std::string& path, TableFormat format,
                         const LoadOptions& options = {});

// Picks the format from the file extension (.csv / .arff).
TableFormat infer_format(const std::string& path);

// Keeps the selected conditional columns plus the decision; sigma values are
// carried over unchanged. Throws on empty mask or length mismatch.
DecisionTable project(const DecisionTable& table, const Bitmask& mask);

std::string table_summary_json(const DecisionTable& table);

const char* to_string(SigmaMode mode);
const char* to_string(FeatureKind kind);

}  // namespace frogsel
