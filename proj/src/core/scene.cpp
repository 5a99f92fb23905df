#include "dlp/core/scene.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "dlp/core/error.hpp"

namespace dlp {

using nlohmann::json;

const char* to_string(BasicState s) { return s == BasicState::seated ? "seated" : "standing"; }

BasicState basic_state_from_string(const std::string& s) {
    if (s == "standing") return BasicState::standing;
    if (s == "seated") return BasicState::seated;
    throw Error("unknown basic state: " + s);
}

std::pair<int, int> SceneGrid::cell_of(const Vec3& position) const {
    return {static_cast<int>(std::floor(position.x / cell_size)),
            static_cast<int>(std::floor(position.z / cell_size))};
}

Vec3 SceneGrid::cell_center(int cx, int cy) const {
    return {(cx + 0.5) * cell_size, 0.0, (cy + 0.5) * cell_size};
}

std::pair<int, int> SceneGrid::nearest_free_cell(const Vec3& position) const {
    const auto direct = cell_of(position);
    if (free_cell(direct.first, direct.second)) return direct;
    double best = std::numeric_limits<double>::infinity();
    std::pair<int, int> best_cell{-1, -1};
    for (int cy = 0; cy < height; ++cy) {
        for (int cx = 0; cx < width; ++cx) {
            if (!free_cell(cx, cy)) continue;
            const Vec3 c = cell_center(cx, cy);
            const double dx = c.x - position.x;
            const double dz = c.z - position.z;
            const double d = dx * dx + dz * dz;
            if (d < best || (d == best && std::pair{cx, cy} < best_cell)) {
                best = d;
                best_cell = {cx, cy};
            }
        }
    }
    if (best_cell.first < 0) throw Error("scene grid has no free cells");
    return best_cell;
}

const Spot* Scene::find_spot(const std::string& name) const {
    for (const auto& s : spots) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

void Scene::validate() const {
    std::set<std::string> names;
    for (const auto& s : spots) {
        if (!names.insert(s.name).second) throw Error("scene: duplicate spot name " + s.name);
        const auto [cx, cy] = grid.cell_of(s.position);
        if (!grid.free_cell(cx, cy)) {
            throw Error("scene: spot " + s.name + " is not on a free grid cell");
        }
    }
}

Scene scene_from_json_text(const std::string& text) {
    json j = json::parse(text);
    Scene scene;
    scene.grid.width = j.at("grid").at("width").get<int>();
    scene.grid.height = j.at("grid").at("height").get<int>();
    scene.grid.cell_size = j.at("grid").at("cell_size").get<double>();
    if (j.at("grid").contains("blocked")) {
        for (const auto& b : j.at("grid").at("blocked")) {
            scene.grid.blocked.insert({b.at(0).get<int>(), b.at(1).get<int>()});
        }
    }
    for (const auto& s : j.at("spots")) {
        Spot spot;
        spot.name = s.at("name").get<std::string>();
        const auto& p = s.at("position");
        spot.position = {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()};
        const auto& f = s.at("facing");
        spot.facing = normalized({f.at(0).get<double>(), f.at(1).get<double>(), f.at(2).get<double>()});
        spot.basic_state = basic_state_from_string(s.at("basic_state").get<std::string>());
        scene.spots.push_back(spot);
    }
    scene.validate();
    return scene;
}

std::string scene_to_json_text(const Scene& scene) {
    json j;
    j["grid"] = {{"width", scene.grid.width},
                 {"height", scene.grid.height},
                 {"cell_size", scene.grid.cell_size}};
    auto blocked = json::array();
    for (const auto& [x, y] : scene.grid.blocked) blocked.push_back({x, y});
    j["grid"]["blocked"] = blocked;
    auto spots = json::array();
    for (const auto& s : scene.spots) {
        spots.push_back({{"name", s.name},
                         {"position", {s.position.x, s.position.y, s.position.z}},
                         {"facing", {s.facing.x, s.facing.y, s.facing.z}},
                         {"basic_state", to_string(s.basic_state)}});
    }
    j["spots"] = spots;
    return j.dump(2);
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scene_from_json_text(text);
}

}  // namespace dlp
