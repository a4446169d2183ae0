#include "confract/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace confract::io {

namespace {

bool parse_point(const std::string& line, std::vector<double>& coords) {
    coords.clear();
    std::istringstream ss(line);
    double v;
    while (ss >> v) coords.push_back(v);
    if (!ss.eof()) {
        std::string rest;
        ss.clear();
        ss >> rest;
        if (!rest.empty()) throw std::invalid_argument("malformed coordinate line: " + line);
    }
    return !coords.empty();
}

geom::Configuration to_configuration(const std::vector<std::vector<double>>& rows) {
    const std::size_t k = rows.size();
    const std::size_t d = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != d)
            throw std::invalid_argument("inconsistent coordinate count across points");
    Eigen::MatrixXd points(static_cast<long>(d), static_cast<long>(k));
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < d; ++i)
            points(static_cast<long>(i), static_cast<long>(j)) = rows[j][i];
    return geom::Configuration(std::move(points));
}

std::string format_point(const Eigen::VectorXd& p) {
    std::string line;
    char buf[64];
    for (long i = 0; i < p.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", p(i));
        if (i) line += ' ';
        line += buf;
    }
    return line;
}

}  // namespace

std::vector<geom::Configuration> read_configurations(std::istream& in) {
    std::vector<geom::Configuration> configs;
    std::vector<std::vector<double>> rows;
    std::vector<double> coords;
    std::string line;
    const auto flush = [&] {
        if (!rows.empty()) {
            configs.push_back(to_configuration(rows));
            rows.clear();
        }
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            flush();
            continue;
        }
        if (parse_point(line, coords)) rows.push_back(coords);
    }
    flush();
    return configs;
}

std::vector<geom::Configuration> read_configurations_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return read_configurations(in);
}

void write_configuration(std::ostream& out, const geom::Configuration& x) {
    for (int j = 0; j < x.k(); ++j) out << format_point(x.point(j)) << '\n';
}

void write_sample_set(std::ostream& out, const fractal::SampleSet& samples) {
    char header[160];
    std::snprintf(header, sizeof(header), "# d=%d n=%d seed=%" PRIu64 "\n", samples.d(),
                  samples.n(), samples.seed.seed);
    out << header;
    std::snprintf(header, sizeof(header), "# ifs=%s burn_in=%d stream=%" PRIu64 "\n",
                  samples.ifs_description.empty() ? "unknown" : samples.ifs_description.c_str(),
                  samples.burn_in, samples.seed.stream);
    out << header;
    for (int i = 0; i < samples.n(); ++i) out << format_point(samples.points.col(i)) << '\n';
}

void write_sample_set_file(const std::string& path, const fractal::SampleSet& samples) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
    write_sample_set(out, samples);
}

fractal::SampleSet read_sample_set(std::istream& in) {
    fractal::SampleSet samples;
    std::vector<std::vector<double>> rows;
    std::vector<double> coords;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            if (!header_seen) {
                std::uint64_t seed = 0;
                int d = 0, n = 0;
                if (std::sscanf(line.c_str(), "# d=%d n=%d seed=%" SCNu64, &d, &n, &seed) == 3) {
                    samples.seed.seed = seed;
                    header_seen = true;
                }
            } else {
                char desc[96] = {0};
                int burn = 0;
                std::uint64_t stream = 0;
                if (std::sscanf(line.c_str(), "# ifs=%95s burn_in=%d stream=%" SCNu64, desc,
                                &burn, &stream) >= 2) {
                    samples.ifs_description = desc;
                    samples.burn_in = burn;
                    samples.seed.stream = stream;
                }
            }
            continue;
        }
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (parse_point(line, coords)) rows.push_back(coords);
    }
    if (rows.empty()) throw std::invalid_argument("sample file contains no points");
    const std::size_t d = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != d)
            throw std::invalid_argument("inconsistent coordinate count in sample file");
    samples.points.resize(static_cast<long>(d), static_cast<long>(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j)
        for (std::size_t i = 0; i < d; ++i)
            samples.points(static_cast<long>(i), static_cast<long>(j)) = rows[j][i];
    return samples;
}

fractal::SampleSet read_sample_set_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return read_sample_set(in);
}

}  // namespace confract::io
