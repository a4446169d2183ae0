#pragma once

#include "confract/configuration.hpp"
#include "confract/fractal.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace confract::io {

/// Text format: one point per line, d whitespace-separated decimal
/// coordinates; a blank line separates configurations; lines starting
/// with '#' are comments.
std::vector<geom::Configuration> read_configurations(std::istream& in);
std::vector<geom::Configuration> read_configurations_file(const std::string& path);

void write_configuration(std::ostream& out, const geom::Configuration& x);

/// Sample files carry a `# d=<d> n=<n> seed=<seed>` header (plus a second
/// comment line with the generator description) and then one point per
/// line, so a sample file also parses as one big configuration.
void write_sample_set(std::ostream& out, const fractal::SampleSet& samples);
void write_sample_set_file(const std::string& path, const fractal::SampleSet& samples);

fractal::SampleSet read_sample_set(std::istream& in);
fractal::SampleSet read_sample_set_file(const std::string& path);

}  // namespace confract::io
