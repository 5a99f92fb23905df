#include "dlp/core/clip_io.hpp"

#include <fstream>

#include <json.hpp>

#include "dlp/core/error.hpp"

namespace dlp {

using nlohmann::json;

std::string clip_to_json_text(const MotionClip& clip) {
    json j;
    j["id"] = clip.id;
    j["fps"] = clip.fps;
    j["category"] = to_string(clip.category);
    j["annotation"] = clip.annotation;
    auto joints = json::array();
    for (int i = 0; i < kJointCount; ++i) {
        joints.push_back({{"name", clip.skeleton->joint_names[i]},
                          {"parent", clip.skeleton->parent_index[i]},
                          {"offset",
                           {clip.skeleton->rest_offsets[i].x, clip.skeleton->rest_offsets[i].y,
                            clip.skeleton->rest_offsets[i].z}}});
    }
    j["skeleton"] = {{"joints", joints}};
    auto frames = json::array();
    for (const auto& f : clip.frames) {
        json jf;
        jf["root"] = {f.root_position.x, f.root_position.y, f.root_position.z};
        auto rots = json::array();
        for (const auto& r : f.joint_rotations) {
            rots.push_back({r[0], r[1], r[2], r[3], r[4], r[5]});
        }
        jf["rot6d"] = rots;
        frames.push_back(std::move(jf));
    }
    j["frames"] = frames;
    return j.dump();
}

MotionClip clip_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("clip json: ") + e.what());
    }
    MotionClip clip;
    clip.id = j.at("id").get<std::string>();
    clip.fps = j.at("fps").get<double>();
    clip.category = clip_category_from_string(j.value("category", "basic"));
    clip.annotation = j.value("annotation", "");

    auto skeleton = std::make_shared<Skeleton>();
    for (const auto& joint : j.at("skeleton").at("joints")) {
        skeleton->joint_names.push_back(joint.at("name").get<std::string>());
        skeleton->parent_index.push_back(joint.at("parent").get<int>());
        const auto& o = joint.at("offset");
        skeleton->rest_offsets.push_back(
            {o.at(0).get<double>(), o.at(1).get<double>(), o.at(2).get<double>()});
    }
    clip.skeleton = skeleton;

    for (const auto& jf : j.at("frames")) {
        Pose p;
        const auto& root = jf.at("root");
        p.root_position = {root.at(0).get<double>(), root.at(1).get<double>(),
                           root.at(2).get<double>()};
        const auto& rots = jf.at("rot6d");
        if (rots.size() != kJointCount) throw IoError("clip json: expected 21 rotations");
        for (int i = 0; i < kJointCount; ++i) {
            for (int c = 0; c < 6; ++c) p.joint_rotations[i][c] = rots.at(i).at(c).get<double>();
        }
        clip.frames.push_back(p);
    }
    clip.validate();
    return clip;
}

void save_clip(const MotionClip& clip, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write clip file: " + path);
    out << clip_to_json_text(clip);
}

MotionClip load_clip(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open clip file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return clip_from_json_text(text);
}

}  // namespace dlp
