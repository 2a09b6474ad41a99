#include "dihedral/chain_io.hpp"

#include <fstream>
#include <istream>
#include <stdexcept>

#include <json.hpp>

namespace dihedral {

using nlohmann::json;

Chain read_chain_json(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("chain JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw std::invalid_argument("chain JSON needs a \"vertices\" array");

    Chain c;
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
            !v[2].is_number())
            throw std::invalid_argument("chain vertex must be [x, y, z]");
        c.vertices.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
    }
    if (j.contains("allowed_overlaps")) {
        if (!j["allowed_overlaps"].is_array())
            throw std::invalid_argument("allowed_overlaps must be an array of pairs");
        for (const auto& p : j["allowed_overlaps"]) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() ||
                !p[1].is_number_unsigned())
                throw std::invalid_argument("allowed_overlaps entry must be [i, j]");
            std::size_t a = p[0].get<std::size_t>(), b = p[1].get<std::size_t>();
            if (a > b) std::swap(a, b);
            c.allowed_overlaps.insert({a, b});
        }
    }
    c.validate();
    return c;
}

Chain read_chain_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open chain file: " + path);
    return read_chain_json(in);
}

std::string chain_to_json(const Chain& c, int indent) {
    json j;
    j["vertices"] = json::array();
    for (const Point3& p : c.vertices) j["vertices"].push_back({p.x, p.y, p.z});
    if (!c.allowed_overlaps.empty()) {
        j["allowed_overlaps"] = json::array();
        for (const auto& [a, b] : c.allowed_overlaps) j["allowed_overlaps"].push_back({a, b});
    }
    return j.dump(indent);
}

void write_chain_file(const Chain& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << chain_to_json(c) << "\n";
}

}  // namespace dihedral
