#include "oscbm/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "oscbm/version.hpp"

namespace oscbm::report {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

std::string Csv::to_string() const {
    std::ostringstream out;
    out << "experiment,observable,t,label,arg,estimate,stderr,exact,source,seed\n";
    for (const Row& r : rows_) {
        out << r.experiment << ',' << r.observable << ',' << fmt(r.t) << ','
            << fmt(r.label) << ',' << fmt(r.arg) << ',' << fmt(r.estimate) << ','
            << fmt(r.se) << ',' << fmt(r.exact) << ',' << r.source << ',' << r.seed
            << '\n';
    }
    return out.str();
}

void Csv::write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("csv: cannot open " + path);
    f << to_string();
}

std::string manifest_string(const config::Config& cfg,
                            const std::vector<std::string>& outputs) {
    nlohmann::json j;
    j["tool"] = version::kName;
    j["version"] = version::kVersion;
    std::string canon = cfg.canonical();
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config::fnv1a(canon)));
    j["config_hash"] = hash;
    j["config"] = nlohmann::json::object();
    for (const auto& [k, v] : cfg.items()) j["config"][k] = v;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

void write_manifest(const std::string& path, const config::Config& cfg,
                    const std::vector<std::string>& outputs) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("manifest: cannot open " + path);
    f << manifest_string(cfg, outputs);
}

}  // namespace oscbm::report
