#include "dihedral/reduction_io.hpp"

#include <fstream>
#include <istream>
#include <stdexcept>

#include <json.hpp>

namespace dihedral {

using nlohmann::json;

namespace {

std::vector<long long> int_array(const json& j, const char* name) {
    if (!j.is_array()) throw std::invalid_argument(std::string(name) + " must be an array");
    std::vector<long long> out;
    for (const auto& x : j) {
        if (!x.is_number_integer())
            throw std::invalid_argument(std::string(name) + " entries must be integers");
        out.push_back(x.get<long long>());
    }
    return out;
}

}  // namespace

ThreeSumInstance read_sets_json(std::istream& in, bool* wasSingleSet) {
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("sets JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("sets JSON must be an object");

    if (j.contains("S")) {
        if (wasSingleSet) *wasSingleSet = true;
        return three_sets_from_single(int_array(j["S"], "S"));
    }
    if (!j.contains("A") || !j.contains("B") || !j.contains("C"))
        throw std::invalid_argument("sets JSON needs either \"S\" or \"A\",\"B\",\"C\"");
    if (wasSingleSet) *wasSingleSet = false;
    return ThreeSumInstance{int_array(j["A"], "A"), int_array(j["B"], "B"),
                            int_array(j["C"], "C")};
}

ThreeSumInstance read_sets_file(const std::string& path, bool* wasSingleSet) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open sets file: " + path);
    return read_sets_json(in, wasSingleSet);
}

std::string sets_to_json(const ThreeSumInstance& inst, int indent) {
    json j;
    j["version"] = 1;
    j["A"] = inst.A;
    j["B"] = inst.B;
    j["C"] = inst.C;
    return j.dump(indent);
}

std::string transcript_to_json(const ReductionTranscript& t, int indent) {
    json j;
    j["version"] = 1;
    j["mode"] = t.mode;
    j["hingeCount"] = t.hingeCount;
    j["encodingRotations"] = t.encodingRotations;
    j["probeRotations"] = t.probeRotations;
    j["pairTestsTotal"] = t.pairTestsTotal;
    j["queries"] = json::array();
    for (const QueryRecord& q : t.queries) {
        json rec;
        rec["phase"] = q.phase;
        rec["edgeIndex"] = q.edgeIndex;
        rec["angle"] = q.angle;
        rec["feasible"] = q.feasible;
        rec["pairTests"] = q.pairTests;
        if (q.witness) {
            const CollisionEvent& w = *q.witness;
            rec["witness"] = {{"tFraction", w.tFraction},
                              {"angleAtContact", w.angleAtContact},
                              {"movingSegment", w.movingSegment},
                              {"staticSegment", w.staticSegment},
                              {"contact", {w.contact.x, w.contact.y, w.contact.z}}};
        }
        j["queries"].push_back(std::move(rec));
    }
    if (t.answer)
        j["answer"] = {{"triple", {(*t.answer)[0], (*t.answer)[1], (*t.answer)[2]}}};
    else
        j["answer"] = {{"triple", nullptr}};
    return j.dump(indent);
}

}  // namespace dihedral
