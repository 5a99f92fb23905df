#pragma once

#include <string>

#include "dlp/core/skeleton.hpp"

namespace dlp {

// Clip interchange JSON. Units are meters and seconds, axes y-up:
// {
//   "id": "...", "fps": 30.0, "category": "basic|interactive|script",
//   "annotation": "...",
//   "skeleton": {"joints": [{"name": "...", "parent": -1, "offset": [x,y,z]}]},
//   "frames": [{"root": [x,y,z], "rot6d": [[6 floats] x 21]}]
// }
std::string clip_to_json_text(const MotionClip& clip);
MotionClip clip_from_json_text(const std::string& text);

void save_clip(const MotionClip& clip, const std::string& path);
MotionClip load_clip(const std::string& path);

}  // namespace dlp
