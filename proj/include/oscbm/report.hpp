#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oscbm/config.hpp"

namespace oscbm::report {

// One comparison record: an estimated quantity, its uncertainty, and the
// reference value it is checked against.
struct Row {
    std::string experiment;
    std::string observable;
    double t = 0.0;
    double label = 0.0;
    double arg = 0.0;
    double estimate = 0.0;
    double se = 0.0;     // standard error (0 for deterministic values)
    double exact = 0.0;  // reference value
    std::string source;  // provenance of the reference
    uint64_t seed = 0;
};

class Csv {
  public:
    void add(const Row& r) { rows_.push_back(r); }
    const std::vector<Row>& rows() const { return rows_; }
    std::string to_string() const;  // header + rows, locale-independent
    void write(const std::string& path) const;

  private:
    std::vector<Row> rows_;
};

// JSON manifest: version, config hash, canonical config, output files.
void write_manifest(const std::string& path, const config::Config& cfg,
                    const std::vector<std::string>& outputs);
std::string manifest_string(const config::Config& cfg,
                            const std::vector<std::string>& outputs);

}  // namespace oscbm::report
