#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "semiflat/grid.hpp"
#include "semiflat/painleve.hpp"

namespace semiflat {

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip text for a double ("%.17g").
std::string format_double(double v);

nlohmann::ordered_json to_json(const GridShape& s);
GridShape shape_from_json(const nlohmann::ordered_json& j);

/// CSV: a '#' line holding JSON metadata (schema, shape, extra keys), a
/// header row "j,v0,...,v{nx-1}", then one row per grid line j.
void write_grid_csv(std::ostream& os, const ScalarGrid& g, const nlohmann::ordered_json& meta = {});
/// Throws Schema on malformed input. Extra metadata is returned through `meta`.
ScalarGrid read_grid_csv(std::istream& is, nlohmann::ordered_json* meta = nullptr);

nlohmann::ordered_json grid_to_json(const ScalarGrid& g, const nlohmann::ordered_json& meta = {});
ScalarGrid grid_from_json(const nlohmann::ordered_json& j);

/// CSV with columns s,H,Hs after a '#' metadata line.
void write_radial_csv(std::ostream& os, const RadialSolution& rs,
                      const nlohmann::ordered_json& meta = {});
RadialSolution read_radial_csv(std::istream& is, nlohmann::ordered_json* meta = nullptr);
nlohmann::ordered_json radial_to_json(const RadialSolution& rs, const PIIIParams& p);

/// Whole-file helpers; throw Io on failure.
std::string read_text_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& text);

}  // namespace semiflat
