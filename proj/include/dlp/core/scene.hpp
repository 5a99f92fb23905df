#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dlp/core/math.hpp"

namespace dlp {

enum class BasicState { standing, seated };

const char* to_string(BasicState s);
BasicState basic_state_from_string(const std::string& s);

struct Spot {
    std::string name;
    Vec3 position;
    Vec3 facing{0, 0, 1};
    BasicState basic_state = BasicState::standing;
};

struct SceneGrid {
    int width = 0;
    int height = 0;
    double cell_size = 0.5;  // meters
    std::set<std::pair<int, int>> blocked;

    bool in_bounds(int cx, int cy) const { return cx >= 0 && cx < width && cy >= 0 && cy < height; }
    bool free_cell(int cx, int cy) const {
        return in_bounds(cx, cy) && !blocked.count({cx, cy});
    }
    // Cell containing a world position (x maps to cx, z to cy).
    std::pair<int, int> cell_of(const Vec3& position) const;
    Vec3 cell_center(int cx, int cy) const;
    // Nearest free cell by squared center distance; ties by (cx, cy).
    std::pair<int, int> nearest_free_cell(const Vec3& position) const;
};

struct Scene {
    std::vector<Spot> spots;
    SceneGrid grid;

    const Spot* find_spot(const std::string& name) const;
    // Throws Error on duplicate spot names or spots on blocked cells.
    void validate() const;
};

Scene scene_from_json_text(const std::string& text);
std::string scene_to_json_text(const Scene& scene);
Scene load_scene(const std::string& path);

}  // namespace dlp
