#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cove::metrics {

struct GeoRecord {
    int64_t geoname_id = 0;
    std::string name;
    std::vector<std::string> alternates;
    double lat = 0;
    double lon = 0;
    int64_t population = 0;
    std::optional<int64_t> parent_id;
    /// Root first, the record itself last.
    std::vector<int64_t> hierarchy_path;
};

/// Offline place-name table with a parent hierarchy.
/// TSV columns: geoname_id, name, alternates ('|' separated), lat, lon, population, parent_id.
class Gazetteer {
public:
    static Gazetteer load(const std::filesystem::path& file);
    static Gazetteer parse(std::istream& in);

    /// Adds a record; call finalize() after the last one.
    void add(GeoRecord record);
    /// Validates coordinates and parents and builds hierarchy paths. Throws ParseError.
    void finalize();

    const GeoRecord* find(int64_t id) const;
    size_t size() const { return records_.size(); }
    const std::map<int64_t, GeoRecord>& records() const { return records_; }

    /// Longest matching name span wins. Equal spans prefer a record whose ancestor is
    /// also named in the text, then the leftmost span. Records sharing a span are
    /// ordered by ancestor mention, population (higher first), then geoname_id.
    std::optional<GeoRecord> resolve(std::string_view text) const;

private:
    std::map<int64_t, GeoRecord> records_;
    // token sequence of a name -> record ids
    std::map<std::vector<std::string>, std::vector<int64_t>> names_;
    size_t longest_name_ = 0;
};

std::optional<GeoRecord> resolve_location(std::string_view text, const Gazetteer& gazetteer);

double haversine_km(double lat1, double lon1, double lat2, double lon2);
/// 1/(1 + km/1000).
double coordinates_delta(const GeoRecord& pred, const GeoRecord& ref);
/// Steps between the two records through their lowest common ancestor.
size_t hierarchy_steps(const GeoRecord& a, const GeoRecord& b);
/// 1/(1 + steps).
double hierarchy_delta(const GeoRecord& pred, const GeoRecord& ref);

}  // namespace cove::metrics
