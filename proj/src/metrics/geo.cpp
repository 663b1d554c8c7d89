#include "cove/metrics/geo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <tuple>

#include "cove/core/errors.hpp"
#include "cove/core/text.hpp"

namespace cove::metrics {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

double to_double(const std::string& s, size_t line) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("gazetteer line " + std::to_string(line) + ": bad number '" + s + "'");
    }
}

int64_t to_int(const std::string& s, size_t line) {
    try {
        size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("gazetteer line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
}

}  // namespace

Gazetteer Gazetteer::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open gazetteer " + file.string());
    return parse(in);
}

Gazetteer Gazetteer::parse(std::istream& in) {
    Gazetteer g;
    std::string line;
    size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto cols = split(line, '\t');
        if (cols.size() < 6) throw ParseError("gazetteer line " + std::to_string(n) + ": expected 7 columns");
        GeoRecord r;
        r.geoname_id = to_int(cols[0], n);
        r.name = cols[1];
        if (!cols[2].empty())
            for (auto& a : split(cols[2], '|'))
                if (!a.empty()) r.alternates.push_back(a);
        r.lat = to_double(cols[3], n);
        r.lon = to_double(cols[4], n);
        r.population = cols[5].empty() ? 0 : to_int(cols[5], n);
        if (cols.size() > 6 && !cols[6].empty() && cols[6] != "0") r.parent_id = to_int(cols[6], n);
        g.add(std::move(r));
    }
    g.finalize();
    return g;
}

void Gazetteer::add(GeoRecord record) {
    const int64_t id = record.geoname_id;
    if (records_.count(id)) throw ParseError("gazetteer: duplicate geoname_id " + std::to_string(id));
    std::vector<std::string> names{record.name};
    names.insert(names.end(), record.alternates.begin(), record.alternates.end());
    for (const auto& name : names) {
        auto tokens = text::word_tokens(name);
        if (tokens.empty()) continue;
        longest_name_ = std::max(longest_name_, tokens.size());
        auto& ids = names_[std::move(tokens)];
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    records_.emplace(id, std::move(record));
}

void Gazetteer::finalize() {
    for (auto& [id, r] : records_) {
        if (r.lat < -90 || r.lat > 90 || r.lon < -180 || r.lon > 180)
            throw ParseError("gazetteer: coordinates out of range for " + std::to_string(id));
        std::vector<int64_t> path{id};
        std::set<int64_t> seen{id};
        std::optional<int64_t> parent = r.parent_id;
        while (parent) {
            auto it = records_.find(*parent);
            if (it == records_.end())
                throw ParseError("gazetteer: unknown parent " + std::to_string(*parent) + " of " + std::to_string(id));
            if (!seen.insert(*parent).second) throw ParseError("gazetteer: cycle through " + std::to_string(id));
            path.push_back(*parent);
            parent = it->second.parent_id;
        }
        std::reverse(path.begin(), path.end());
        r.hierarchy_path = std::move(path);
    }
}

const GeoRecord* Gazetteer::find(int64_t id) const {
    auto it = records_.find(id);
    return it == records_.end() ? nullptr : &it->second;
}

std::optional<GeoRecord> Gazetteer::resolve(std::string_view text) const {
    const auto tokens = text::word_tokens(text);
    struct Span {
        size_t start;
        size_t len;
        const std::vector<int64_t>* ids;
    };
    std::vector<Span> spans;
    std::set<int64_t> mentioned;
    for (size_t i = 0; i < tokens.size(); ++i) {
        for (size_t len = 1; len <= longest_name_ && i + len <= tokens.size(); ++len) {
            std::vector<std::string> key(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                         tokens.begin() + static_cast<std::ptrdiff_t>(i + len));
            auto it = names_.find(key);
            if (it == names_.end()) continue;
            spans.push_back({i, len, &it->second});
            mentioned.insert(it->second.begin(), it->second.end());
        }
    }
    if (spans.empty()) return std::nullopt;

    auto ancestor_mentioned = [&](int64_t id) {
        const auto& path = records_.at(id).hierarchy_path;
        for (size_t k = 0; k + 1 < path.size(); ++k)
            if (mentioned.count(path[k])) return true;
        return false;
    };
    auto best_record = [&](const Span& s) {
        int64_t best = s.ids->front();
        auto rank = [&](int64_t id) {
            const auto& r = records_.at(id);
            return std::make_tuple(!ancestor_mentioned(id), -r.population, id);
        };
        for (int64_t id : *s.ids)
            if (rank(id) < rank(best)) best = id;
        return best;
    };

    const Span* chosen = nullptr;
    bool chosen_anchored = false;
    for (const auto& s : spans) {
        const bool anchored = ancestor_mentioned(best_record(s));
        if (!chosen || s.len > chosen->len ||
            (s.len == chosen->len && anchored && !chosen_anchored) ||
            (s.len == chosen->len && anchored == chosen_anchored && s.start < chosen->start)) {
            chosen = &s;
            chosen_anchored = anchored;
        }
    }
    return records_.at(best_record(*chosen));
}

std::optional<GeoRecord> resolve_location(std::string_view text, const Gazetteer& gazetteer) {
    return gazetteer.resolve(text);
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    constexpr double kRadius = 6371.0;
    const double to_rad = std::numbers::pi / 180.0;
    const double dlat = (lat2 - lat1) * to_rad;
    const double dlon = (lon2 - lon1) * to_rad;
    const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(lat1 * to_rad) * std::cos(lat2 * to_rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2 * kRadius * std::asin(std::min(1.0, std::sqrt(a)));
}

double coordinates_delta(const GeoRecord& pred, const GeoRecord& ref) {
    return 1.0 / (1.0 + haversine_km(pred.lat, pred.lon, ref.lat, ref.lon) / 1000.0);
}

size_t hierarchy_steps(const GeoRecord& a, const GeoRecord& b) {
    const auto& pa = a.hierarchy_path.empty() ? std::vector<int64_t>{a.geoname_id} : a.hierarchy_path;
    const auto& pb = b.hierarchy_path.empty() ? std::vector<int64_t>{b.geoname_id} : b.hierarchy_path;
    size_t common = 0;
    while (common < pa.size() && common < pb.size() && pa[common] == pb[common]) ++common;
    return (pa.size() - common) + (pb.size() - common);
}

double hierarchy_delta(const GeoRecord& pred, const GeoRecord& ref) {
    return 1.0 / (1.0 + static_cast<double>(hierarchy_steps(pred, ref)));
}

}  // namespace cove::metrics
