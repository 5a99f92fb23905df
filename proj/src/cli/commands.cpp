#include "dlp/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlp/core/clip_io.hpp"
#include "dlp/evalkit/protocol.hpp"
#include "dlp/evalkit/synthetic.hpp"
#include "dlp/jsonschema.hpp"
#include "dlp/mind/agent.hpp"
#include "dlp/pathfind/cbs.hpp"
#include "dlp/sched/scheduler.hpp"

namespace dlp::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& text) {
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);
    out << text;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        write_file(out_path, text);
    }
}

Trajectory trajectory_from_json_text(const std::string& text) {
    const json j = json::parse(text);
    Trajectory traj;
    for (const auto& s : j.at("samples")) {
        TrajectorySample sample;
        sample.time = s.at("time").get<double>();
        sample.x = s.at("position").at(0).get<double>();
        sample.z = s.at("position").at(1).get<double>();
        const auto& f = s.at("facing");
        sample.facing = normalized(
            {f.at(0).get<double>(), f.at(1).get<double>(), f.at(2).get<double>()});
        traj.samples.push_back(sample);
    }
    traj.validate();
    return traj;
}

json trajectory_to_json(const Trajectory& traj) {
    json samples = json::array();
    for (const auto& s : traj.samples) {
        samples.push_back({{"time", s.time},
                           {"position", {s.x, s.z}},
                           {"facing", {s.facing.x, s.facing.y, s.facing.z}}});
    }
    return {{"version", kVersion}, {"samples", samples}};
}

BackgroundCandidate background_from_json_text(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    BackgroundCandidate bg;
    bg.background = j.at("background").get<std::string>();
    bg.poignancy = clamp_likert(j.value("poignancy", 5));
    bg.emergency = clamp_likert(j.value("emergency", 5));
    if (j.contains("initial_setting")) {
        for (const auto& [name, s] : j.at("initial_setting").items()) {
            InitialSetting setting;
            setting.emotion = s.value("emotion", "");
            setting.place = s.value("place", "");
            setting.motion = s.value("motion", "");
            bg.initial_settings.emplace_back(name, setting);
        }
    }
    return bg;
}

std::vector<Topic> topics_from_background_json(const std::string& text) {
    const json j = json::parse(text);
    std::vector<Topic> topics;
    for (const auto& t : j.value("topics", json::array())) {
        topics.push_back({t.value("description", ""), clamp_likert(t.value("poignancy", 5)),
                          clamp_likert(t.value("emergency", 5))});
    }
    return topics;
}

struct AgentSetup {
    std::string name;
    PsychState state;
};

AgentSetup agent_from_json_text(const std::string& text) {
    const json j = json::parse(text);
    AgentSetup setup;
    setup.name = j.at("name").get<std::string>();
    setup.state = psych_state_from_json_text(text);
    return setup;
}

std::shared_ptr<ProviderPort> make_provider(const std::string& kind,
                                            const std::string& mock_script,
                                            std::uint64_t seed) {
    if (kind == "mock") {
        auto mock = std::make_shared<MockProvider>(seed);
        if (!mock_script.empty()) mock->load_rules_json(read_file(mock_script));
        return mock;
    }
    if (kind == "http") {
        auto config = HttpProvider::config_from_env();
        config.seed = seed;
        return std::make_shared<HttpProvider>(config);
    }
    throw DomainError("unknown provider: " + kind);
}

json match_result_to_json(const momat::MatchResult& r) {
    return {{"clip", r.clip_id},
            {"start", r.window.start},
            {"similarity",
             {{"trajectory", {{"raw", r.sim.t_raw}, {"normalized", r.sim.t_norm}}},
              {"facing", {{"raw", r.sim.f_raw}, {"normalized", r.sim.f_norm}}},
              {"body", {{"raw", r.sim.b_raw}, {"normalized", r.sim.b_norm}}},
              {"hip", {{"raw", r.sim.h_raw}, {"normalized", r.sim.h_norm}}},
              {"partner", {{"raw", r.sim.p_raw}, {"normalized", r.sim.p_norm}}},
              {"total", r.sim.total}}}};
}

json positions_to_json(const mogen::MotionPairTensor& pair) {
    auto dump = [&](const std::vector<double>& v) {
        json frames = json::array();
        for (int i = 0; i < pair.frames; ++i) {
            json joints = json::array();
            for (int j = 0; j < pair.joints; ++j) {
                const std::size_t o = (static_cast<std::size_t>(i) * pair.joints + j) * 3;
                joints.push_back({v[o], v[o + 1], v[o + 2]});
            }
            frames.push_back(joints);
        }
        return frames;
    };
    return {{"version", kVersion},
            {"frames", pair.frames},
            {"joints", pair.joints},
            {"a", dump(pair.x)},
            {"b", dump(pair.y)}};
}

mogen::MotionPairTensor pair_from_clips(const MotionClip& a, const MotionClip& b) {
    if (a.frames.size() != b.frames.size()) {
        throw LengthMismatch("motion pair clips must have equal frame counts");
    }
    mogen::MotionPairTensor pair =
        mogen::MotionPairTensor::zeros(static_cast<int>(a.frames.size()), kJointCount);
    for (std::size_t f = 0; f < a.frames.size(); ++f) {
        const auto pa = forward_kinematics(*a.skeleton, a.frames[f]);
        const auto pb = forward_kinematics(*b.skeleton, b.frames[f]);
        for (int j = 0; j < kJointCount; ++j) {
            const std::size_t o = (f * kJointCount + j) * 3;
            pair.x[o] = pa[j].x;
            pair.x[o + 1] = pa[j].y;
            pair.x[o + 2] = pa[j].z;
            pair.y[o] = pb[j].x;
            pair.y[o + 1] = pb[j].y;
            pair.y[o + 2] = pb[j].z;
        }
    }
    return pair;
}

struct EpisodeRuntime {
    MotionDatabase db;
    Scene scene;
    std::shared_ptr<const PersonaDb> persona;
    std::shared_ptr<const EmbedderPort> embedder;
    std::shared_ptr<ProviderPort> provider;
};

void write_episode_outputs(const std::string& dir, const sched::EpisodeTranscript& transcript) {
    fs::create_directories(dir);
    fs::create_directories(dir + "/motions");
    write_file(dir + "/transcript.json", transcript_to_json_text(transcript));
    json reflection = json::object();
    for (const auto& [who, text] : transcript.reflection_summary) {
        reflection[who] = json::parse(text);
    }
    write_file(dir + "/reflection.json", reflection.dump(2));
    for (const auto& [who, clip] : transcript.final_motions) {
        write_file(dir + "/motions/" + who + ".json", clip_to_json_text(clip));
    }
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"two-character social interaction engine"};
    app.require_subcommand(1);

    // ---- ingest ----
    auto* ingest = app.add_subcommand("ingest", "add a clip to a motion database");
    std::string ingest_db, ingest_clip, ingest_annotation, ingest_pair, ingest_out;
    int ingest_k = 30, ingest_stride = 10;
    double ingest_fps = 30.0;
    ingest->add_option("--db", ingest_db, "database file (created when missing)")->required();
    ingest->add_option("--clip", ingest_clip, "clip JSON file")->required();
    ingest->add_option("--annotation", ingest_annotation,
                       "text annotation (defaults to the clip's own)");
    ingest->add_option("--pair-with", ingest_pair, "passive partner clip id");
    ingest->add_option("--out", ingest_out, "output db path (defaults to --db)");
    ingest->add_option("--k", ingest_k, "window length for a new db");
    ingest->add_option("--stride", ingest_stride, "window stride for a new db");
    ingest->add_option("--fps", ingest_fps, "fps for a new db");

    // ---- build-index ----
    auto* build = app.add_subcommand("build-index", "build a motion database");
    std::string build_clips, build_pairs, build_out = "motion.db";
    bool build_synthetic = false, build_interactions = false;
    std::uint64_t build_seed = 7;
    int build_k = 30, build_stride = 10;
    double build_fps = 30.0;
    build->add_option("--clips", build_clips, "directory of clip JSON files");
    build->add_option("--pairs", build_pairs,
                      "JSON list of [active_id, passive_id] interactive links");
    build->add_flag("--synthetic", build_synthetic, "generate the procedural corpus");
    build->add_flag("--with-interactions", build_interactions,
                    "include procedural interaction pairs");
    build->add_option("--seed", build_seed, "corpus seed");
    build->add_option("--k", build_k, "window length (frames)");
    build->add_option("--stride", build_stride, "window stride (frames)");
    build->add_option("--fps", build_fps, "database fps");
    build->add_option("--out", build_out, "output database file");

    // ---- match ----
    auto* match_cmd = app.add_subcommand("match", "query the database by text + kinematics");
    std::string match_db, match_text, match_out;
    int match_k1 = 128, match_k2 = 8;
    std::uint64_t match_seed = 7;
    match_cmd->add_option("--db", match_db)->required();
    match_cmd->add_option("--text", match_text)->required();
    match_cmd->add_option("--k1", match_k1);
    match_cmd->add_option("--k2", match_k2);
    match_cmd->add_option("--seed", match_seed);
    match_cmd->add_option("--out", match_out, "output path (stdout when omitted)");

    // ---- follow ----
    auto* follow_cmd = app.add_subcommand("follow", "trajectory-following motion synthesis");
    std::string follow_db, follow_traj, follow_shape, follow_out, follow_report;
    std::uint64_t follow_seed = 7;
    bool follow_no_kin = false;
    double follow_speed = 1.0, follow_duration = 30.0;
    follow_cmd->add_option("--db", follow_db)->required();
    follow_cmd->add_option("--trajectory", follow_traj, "trajectory JSON file");
    follow_cmd->add_option("--shape", follow_shape, "wave|circle|square");
    follow_cmd->add_option("--speed", follow_speed, "traversal speed for circle/square");
    follow_cmd->add_option("--duration", follow_duration, "wave duration (s)");
    follow_cmd->add_option("--seed", follow_seed);
    follow_cmd->add_flag("--no-kinematics", follow_no_kin, "text-only ranking (ablation)");
    follow_cmd->add_option("--out", follow_out, "output motion clip JSON");
    follow_cmd->add_option("--report", follow_report, "error report JSON (stdout when omitted)");

    // ---- plan-paths ----
    auto* plan = app.add_subcommand("plan-paths", "collision-free multi-agent grid planning");
    std::string plan_grid, plan_out;
    plan->add_option("--grid", plan_grid, "grid JSON file")->required();
    plan->add_option("--out", plan_out, "output path (stdout when omitted)");

    // ---- run-episode / run-story ----
    auto add_episode_options = [&](CLI::App* cmd, auto& opts) {
        cmd->add_option("--config", opts.config, "run config JSON (flags override it)");
        cmd->add_option("--db", opts.db, "motion database file");
        cmd->add_option("--scene", opts.scene, "scene JSON");
        cmd->add_option("--agent-a", opts.agent_a, "first agent JSON");
        cmd->add_option("--agent-b", opts.agent_b, "second agent JSON");
        cmd->add_option("--background", opts.background, "episode background JSON");
        cmd->add_option("--persona", opts.persona, "persona instruction CSV");
        cmd->add_option("--provider", opts.provider, "mock|http");
        cmd->add_option("--mock-script", opts.mock_script, "extra mock rules JSON");
        cmd->add_option("--seed", opts.seed);
        cmd->add_option("--max-rounds", opts.max_rounds);
        cmd->add_flag("--mogen", opts.mogen, "enable diffusion contact refinement");
        cmd->add_option("--out", opts.out, "output directory")->required();
    };
    struct EpisodeOpts {
        std::string config, db, scene, agent_a, agent_b, background, persona;
        std::string provider = "mock", mock_script, out;
        std::uint64_t seed = 7;
        int max_rounds = -1;
        bool mogen = false;
    };
    EpisodeOpts ep_opts, story_opts;
    auto* episode_cmd = app.add_subcommand("run-episode", "run one interaction episode");
    add_episode_options(episode_cmd, ep_opts);
    auto* story_cmd = app.add_subcommand("run-story", "run several episodes with planning");
    add_episode_options(story_cmd, story_opts);
    int story_episodes = 3;
    std::string story_inject;
    story_cmd->add_option("--episodes", story_episodes, "number of episodes");
    story_cmd->add_option("--inject-event", story_inject,
                          "text file of manual events (one per line)");

    // ---- refine-contact ----
    auto* refine = app.add_subcommand("refine-contact", "contact-loss refinement of a pair");
    std::string rc_a, rc_b, rc_ref_a, rc_ref_b, rc_out, rc_trace, rc_mode = "refine";
    double rc_gamma = 0.3, rc_lambda = 0.01;
    int rc_steps = 20;
    std::uint64_t rc_seed = 7;
    refine->add_option("--motion-a", rc_a, "first character clip JSON")->required();
    refine->add_option("--motion-b", rc_b, "second character clip JSON")->required();
    refine->add_option("--reference-a", rc_ref_a, "reference pair clip (defaults to inputs)");
    refine->add_option("--reference-b", rc_ref_b);
    refine->add_option("--gamma", rc_gamma, "contact activation radius (m)");
    refine->add_option("--lambda", rc_lambda, "guidance step size");
    refine->add_option("--steps", rc_steps, "guidance steps (refine mode)");
    refine->add_option("--mode", rc_mode, "refine|sample");
    refine->add_option("--seed", rc_seed);
    refine->add_option("--out", rc_out, "refined position motion JSON")->required();
    refine->add_option("--trace", rc_trace, "loss trace CSV");

    // ---- eval-traj ----
    auto* eval = app.add_subcommand("eval-traj", "trajectory-following protocol");
    std::string eval_db, eval_shape = "all", eval_out, eval_csv;
    int eval_seeds = 50;
    std::uint64_t eval_seed = 7;
    bool eval_no_kin = false;
    eval->add_option("--db", eval_db)->required();
    eval->add_option("--shape", eval_shape, "wave|circle|square|all");
    eval->add_option("--seeds", eval_seeds, "seed poses per trajectory");
    eval->add_option("--seed", eval_seed);
    eval->add_flag("--no-kinematics", eval_no_kin);
    eval->add_option("--out", eval_out, "report JSON (stdout when omitted)");
    eval->add_option("--csv", eval_csv, "per-seed error CSV");

    // ---- export-transcript ----
    auto* exp = app.add_subcommand("export-transcript", "validate and render a transcript");
    std::string exp_in, exp_out, exp_schema;
    exp->add_option("--in", exp_in, "transcript JSON")->required();
    exp->add_option("--out", exp_out, "rendered text (stdout when omitted)");
    exp->add_option("--schema", exp_schema, "schema file (defaults to the built-in)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        json diag;
        diag["error"] = "usage";
        diag["message"] = e.what();
        diag["version"] = kVersion;
        std::cerr << diag.dump() << "\n";
        return 1;
    }

    try {
        if (*ingest) {
            MotionDatabase db = fs::exists(ingest_db)
                                    ? MotionDatabase::load(ingest_db)
                                    : MotionDatabase({ingest_k, ingest_stride, ingest_fps});
            MotionClip clip = load_clip(ingest_clip);
            const std::string annotation =
                ingest_annotation.empty() ? clip.annotation : ingest_annotation;
            const std::optional<std::string> pair =
                ingest_pair.empty() ? std::nullopt : std::make_optional(ingest_pair);
            const std::string id = db.ingest(std::move(clip), annotation, pair);
            db.finalize();
            db.save(ingest_out.empty() ? ingest_db : ingest_out);
            std::cout << json{{"version", kVersion}, {"ingested", id},
                              {"windows", db.window_count()}}
                             .dump()
                      << "\n";
        } else if (*build) {
            DbConfig config{build_k, build_stride, build_fps};
            if (build_synthetic) {
                MotionDatabase db = build_interactions
                                        ? evalkit::build_full_db(build_seed, config)
                                        : evalkit::build_locomotion_db(build_seed, config);
                db.save(build_out);
                std::cout << json{{"version", kVersion},
                                  {"clips", db.clips().size()},
                                  {"windows", db.window_count()},
                                  {"out", build_out}}
                                 .dump()
                          << "\n";
            } else {
                if (build_clips.empty()) {
                    throw DomainError("build-index needs --clips or --synthetic");
                }
                std::map<std::string, std::string> pair_of;  // active -> passive
                if (!build_pairs.empty()) {
                    for (const auto& p : json::parse(read_file(build_pairs))) {
                        pair_of[p.at(0).get<std::string>()] = p.at(1).get<std::string>();
                    }
                }
                std::vector<MotionClip> clips;
                std::vector<fs::path> files;
                for (const auto& entry : fs::directory_iterator(build_clips)) {
                    if (entry.path().extension() == ".json") files.push_back(entry.path());
                }
                std::sort(files.begin(), files.end());
                for (const auto& f : files) clips.push_back(load_clip(f.string()));
                MotionDatabase db(config);
                for (auto& clip : clips) {  // passives and basics first
                    if (!pair_of.count(clip.id)) {
                        db.ingest(MotionClip(clip), clip.annotation);
                    }
                }
                for (auto& clip : clips) {
                    if (pair_of.count(clip.id)) {
                        db.ingest(MotionClip(clip), clip.annotation, pair_of[clip.id]);
                    }
                }
                db.finalize();
                db.save(build_out);
                std::cout << json{{"version", kVersion},
                                  {"clips", db.clips().size()},
                                  {"windows", db.window_count()},
                                  {"out", build_out}}
                                 .dump()
                          << "\n";
            }
        } else if (*match_cmd) {
            const MotionDatabase db = MotionDatabase::load(match_db);
            Rng rng(match_seed);
            momat::MatchQuery query;
            query.text = match_text;
            const WindowRef& w0 = db.window(0);
            query.current_pose =
                db.clip(w0.clip_index).frames[std::min<std::size_t>(
                    w0.start, db.clip(w0.clip_index).frames.size() - 1)];
            query.config.K1 = match_k1;
            query.config.K2 = match_k2;
            const momat::MatchResult result = momat::match(db, query, rng);
            json out = match_result_to_json(result);
            out["version"] = kVersion;
            emit(out.dump(2), match_out);
        } else if (*follow_cmd) {
            const MotionDatabase db = MotionDatabase::load(follow_db);
            Trajectory traj;
            if (!follow_traj.empty()) {
                traj = trajectory_from_json_text(read_file(follow_traj));
            } else if (!follow_shape.empty()) {
                evalkit::TrajProtocolConfig pc;
                pc.kind = evalkit::traj_kind_from_string(follow_shape);
                pc.speed = follow_speed;
                pc.duration = follow_duration;
                traj = evalkit::protocol_trajectory(pc, db.config().fps);
            } else {
                throw DomainError("follow needs --trajectory or --shape");
            }
            Rng rng(follow_seed);
            const Pose seed_pose = evalkit::random_seed_pose(db, rng);
            momat::FollowConfig fc;
            fc.kinematics_enabled = !follow_no_kin;
            if (follow_no_kin) fc.stall_check = false;
            const auto result = momat::follow_trajectory(db, seed_pose, traj, fc, rng);
            if (!follow_out.empty()) write_file(follow_out, clip_to_json_text(result.motion));
            json report;
            report["version"] = kVersion;
            report["frames"] = result.motion.frames.size();
            report["segments"] = result.segments.size();
            report["trajectory_error_m"] = evalkit::trajectory_error(result.motion, traj);
            emit(report.dump(2), follow_report);
        } else if (*plan) {
            const json g = json::parse(read_file(plan_grid));
            cbs::GridMap grid;
            grid.width = g.at("width").get<int>();
            grid.height = g.at("height").get<int>();
            grid.cell_size = g.value("cell_size", 0.5);
            for (const auto& b : g.value("blocked", json::array())) {
                grid.blocked.insert({b.at(0).get<int>(), b.at(1).get<int>()});
            }
            std::vector<cbs::Cell> starts, goals;
            for (const auto& a : g.at("agents")) {
                starts.push_back({a.at("start").at(0).get<int>(), a.at("start").at(1).get<int>()});
                goals.push_back({a.at("goal").at(0).get<int>(), a.at("goal").at(1).get<int>()});
            }
            const auto paths = cbs::plan_cbs(grid, starts, goals);
            json out;
            out["version"] = kVersion;
            out["paths"] = json::array();
            int sum = 0;
            for (const auto& p : paths) {
                json cells = json::array();
                for (const auto& c : p.cells) cells.push_back({c.first, c.second});
                out["paths"].push_back({{"agent", p.agent}, {"cost", p.cost()}, {"cells", cells}});
                sum += p.cost();
            }
            out["sum_of_costs"] = sum;
            emit(out.dump(2), plan_out);
        } else if (*episode_cmd || *story_cmd) {
            EpisodeOpts& o = *episode_cmd ? ep_opts : story_opts;
            if (!o.config.empty()) {
                const json c = json::parse(read_file(o.config));
                if (o.db.empty()) o.db = c.value("db", "");
                if (o.scene.empty()) o.scene = c.value("scene", "");
                if (o.agent_a.empty()) o.agent_a = c.value("agent_a", "");
                if (o.agent_b.empty()) o.agent_b = c.value("agent_b", "");
                if (o.background.empty()) o.background = c.value("background", "");
                if (o.persona.empty()) o.persona = c.value("persona", "");
                if (c.contains("provider")) o.provider = c["provider"].get<std::string>();
                if (c.contains("seed")) o.seed = c["seed"].get<std::uint64_t>();
                if (c.contains("max_rounds") && o.max_rounds < 0) {
                    o.max_rounds = c["max_rounds"].get<int>();
                }
                if (c.contains("mock_script") && o.mock_script.empty()) {
                    o.mock_script = c["mock_script"].get<std::string>();
                }
            }
            for (const auto& [what, value] :
                 std::initializer_list<std::pair<const char*, const std::string&>>{
                     {"--db", o.db}, {"--scene", o.scene}, {"--agent-a", o.agent_a},
                     {"--agent-b", o.agent_b}, {"--background", o.background},
                     {"--persona", o.persona}}) {
                if (value.empty()) throw DomainError(std::string("missing ") + what);
            }

            auto embedder = std::make_shared<HashedEmbedder>();
            MotionDatabase db = MotionDatabase::load(o.db, embedder);
            Scene scene = load_scene(o.scene);
            auto persona = std::make_shared<PersonaDb>(
                PersonaDb::load_csv(o.persona, *embedder));
            auto provider = make_provider(o.provider, o.mock_script, o.seed);
            const AgentSetup setup_a = agent_from_json_text(read_file(o.agent_a));
            const AgentSetup setup_b = agent_from_json_text(read_file(o.agent_b));
            AgentMind agent_a(setup_a.name, setup_a.state, persona, embedder, provider);
            AgentMind agent_b(setup_b.name, setup_b.state, persona, embedder, provider);

            sched::WorldConfig wc;
            if (o.max_rounds >= 0) wc.max_rounds = o.max_rounds;
            wc.enable_mogen = o.mogen;
            sched::World world(scene, db, wc);
            world.add_character(agent_a.name(), scene.spots.front().name);
            world.add_character(agent_b.name(),
                                scene.spots.size() > 1 ? scene.spots[1].name
                                                       : scene.spots.front().name);

            BackgroundCandidate bg = background_from_json_text(read_file(o.background));
            std::vector<Topic> topics = topics_from_background_json(read_file(o.background));
            Rng rng(o.seed);

            std::vector<std::string> manual_events;
            if (*story_cmd && !story_inject.empty()) {
                std::ifstream in(story_inject);
                std::string line;
                while (std::getline(in, line)) {
                    if (!line.empty()) manual_events.push_back(line);
                }
            }

            if (*episode_cmd) {
                const auto transcript =
                    world.run_episode(agent_a, agent_b, bg, topics, rng, manual_events);
                write_episode_outputs(o.out, transcript);
                std::cout << json{{"version", kVersion},
                                  {"rounds", transcript.steps.size()},
                                  {"out", o.out}}
                                 .dump()
                          << "\n";
            } else {
                json story;
                story["version"] = kVersion;
                story["episodes"] = json::array();
                std::vector<std::string> past;
                for (int e = 0; e < story_episodes; ++e) {
                    const auto transcript =
                        world.run_episode(agent_a, agent_b, bg, topics, rng, manual_events, past);
                    char dirname[32];
                    std::snprintf(dirname, sizeof(dirname), "episode_%03d", e);
                    write_episode_outputs(o.out + "/" + dirname, transcript);
                    json entry;
                    entry["dir"] = dirname;
                    entry["background"] = transcript.background;
                    entry["rounds"] = transcript.steps.size();
                    for (AgentMind* agent : {&agent_a, &agent_b}) {
                        const std::string partner = agent == &agent_a ? agent_b.name()
                                                                      : agent_a.name();
                        const Relationship& rel = agent->psych().relationships[partner];
                        entry["state"][agent->name()] = {
                            {"pleasure", agent->psych().emotion.pleasure},
                            {"arousal", agent->psych().emotion.arousal},
                            {"dominance", agent->psych().emotion.dominance},
                            {"trust", rel.trust},
                            {"intimacy", rel.intimacy},
                            {"supportiveness", rel.supportiveness}};
                    }
                    story["episodes"].push_back(entry);
                    past.push_back(transcript.background);
                    if (transcript.next_background) {
                        bg = *transcript.next_background;
                        topics.clear();
                    }  // otherwise replay the same background
                }
                write_file(o.out + "/story.json", story.dump(2));
                std::cout << json{{"version", kVersion},
                                  {"episodes", story_episodes},
                                  {"out", o.out}}
                                 .dump()
                          << "\n";
            }
        } else if (*refine) {
            const MotionClip clip_a = load_clip(rc_a);
            const MotionClip clip_b = load_clip(rc_b);
            mogen::MotionPairTensor pair = pair_from_clips(clip_a, clip_b);
            mogen::MotionPairTensor reference = pair;
            if (!rc_ref_a.empty() && !rc_ref_b.empty()) {
                reference = pair_from_clips(load_clip(rc_ref_a), load_clip(rc_ref_b));
            }
            auto constraint =
                mogen::ContactConstraint::from_reference_pair(reference, rc_gamma, rc_lambda);
            std::string trace = "step,loss\n";
            mogen::MotionPairTensor refined = pair;
            if (rc_mode == "refine") {
                trace += "0," + std::to_string(mogen::contact_loss(refined, constraint)) + "\n";
                for (int s = 1; s <= rc_steps; ++s) {
                    refined = mogen::contact_guidance_step(refined, constraint, rc_lambda);
                    trace +=
                        std::to_string(s) + "," +
                        std::to_string(mogen::contact_loss(refined, constraint)) + "\n";
                }
            } else if (rc_mode == "sample") {
                Rng rng(rc_seed);
                const auto schedule = mogen::linear_beta_schedule(1000);
                refined = mogen::sample_with_guidance(schedule, mogen::prior_pull_denoiser(),
                                                      pair, constraint, rng);
                trace += "final," +
                         std::to_string(mogen::contact_loss(refined, constraint)) + "\n";
            } else {
                throw DomainError("refine-contact mode must be refine or sample");
            }
            json out = positions_to_json(refined);
            out["fps"] = clip_a.fps;
            write_file(rc_out, out.dump());
            if (!rc_trace.empty()) write_file(rc_trace, trace);
            std::cout << json{{"version", kVersion},
                              {"final_loss", mogen::contact_loss(refined, constraint)},
                              {"out", rc_out}}
                             .dump()
                      << "\n";
        } else if (*eval) {
            const MotionDatabase db = MotionDatabase::load(eval_db);
            std::vector<evalkit::TrajKind> kinds;
            if (eval_shape == "all") {
                kinds = {evalkit::TrajKind::wave, evalkit::TrajKind::circle,
                         evalkit::TrajKind::square};
            } else {
                kinds = {evalkit::traj_kind_from_string(eval_shape)};
            }
            json out;
            out["version"] = kVersion;
            std::string csv = "shape,seed_index,error_m\n";
            for (const auto kind : kinds) {
                evalkit::TrajProtocolConfig pc;
                pc.kind = kind;
                pc.n_seeds = eval_seeds;
                pc.kinematic_features_enabled = !eval_no_kin;
                const auto report = evalkit::run_traj_protocol(db, pc, eval_seed);
                out[evalkit::to_string(kind)] = {{"mean_m", report.mean},
                                                 {"std_m", report.stddev},
                                                 {"seeds", report.per_seed.size()}};
                for (std::size_t i = 0; i < report.per_seed.size(); ++i) {
                    csv += std::string(evalkit::to_string(kind)) + "," + std::to_string(i) + "," +
                           std::to_string(report.per_seed[i]) + "\n";
                }
            }
            if (!eval_csv.empty()) write_file(eval_csv, csv);
            emit(out.dump(2), eval_out);
        } else if (*exp) {
            const json transcript = json::parse(read_file(exp_in));
            const json schema = exp_schema.empty()
                                    ? json::parse(sched::transcript_schema_json())
                                    : json::parse(read_file(exp_schema));
            const auto errors = jsonschema::validate(schema, transcript);
            if (!errors.empty()) {
                json diag;
                diag["error"] = "schema";
                diag["violations"] = errors;
                std::cerr << diag.dump(2) << "\n";
                return 2;
            }
            std::string text;
            text += "BACKGROUND: " + transcript.at("background").get<std::string>() + "\n\n";
            for (const auto& step : transcript.at("steps")) {
                text += step.at("active").get<std::string>() + ": " +
                        step.at("active_behavior").get<std::string>() + "\n";
                text += step.at("passive").get<std::string>() + ": " +
                        step.at("passive_behavior").get<std::string>() +
                        (step.at("approval").get<bool>() ? "" : "  [declined]") + "\n";
            }
            emit(text, exp_out);
        }
        return 0;
    } catch (const Error& e) {
        json diag;
        diag["error"] = "runtime";
        diag["message"] = e.what();
        diag["version"] = kVersion;
        std::cerr << diag.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json diag;
        diag["error"] = "runtime";
        diag["message"] = e.what();
        diag["version"] = kVersion;
        std::cerr << diag.dump() << "\n";
        return 2;
    }
}

}  // namespace dlp::cli
