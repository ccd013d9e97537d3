#include "bll/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bll/errors.hpp"
#include "bll/init.hpp"

namespace bll {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Strict reader over one JSON object: every key must be consumed.
class Reader {
public:
    Reader(const json& j, std::string path, const std::string& origin) : j_(j), path_(std::move(path)), origin_(origin) {
        if (!j_.is_object()) fail("must be an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    Reader child(const std::string& key) {
        seen_.insert(key);
        return Reader(j_.at(key), field(key), origin_);
    }

    void get(const std::string& key, double& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_number()) fail_field(key, "expected a number");
        out = v.get<double>();
    }

    void get(const std::string& key, int& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_number_integer()) fail_field(key, "expected an integer");
        const auto x = v.get<long long>();
        if (x < INT32_MIN || x > INT32_MAX) fail_field(key, "integer out of range");
        out = static_cast<int>(x);
    }

    void get(const std::string& key, long& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_number_integer()) fail_field(key, "expected an integer");
        out = v.get<long>();
    }

    void get(const std::string& key, std::uint64_t& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_number_unsigned()) fail_field(key, "expected a non-negative integer");
        out = v.get<std::uint64_t>();
    }

    void get(const std::string& key, std::string& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_string()) fail_field(key, "expected a string");
        out = v.get<std::string>();
    }

    template <class T>
    void get(const std::string& key, std::vector<T>& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_array()) fail_field(key, "expected an array");
        out.clear();
        for (const auto& e : v) {
            if constexpr (std::is_integral_v<T>) {
                if (!e.is_number_integer()) fail_field(key, "expected an array of integers");
            } else {
                if (!e.is_number()) fail_field(key, "expected an array of numbers");
            }
            out.push_back(e.get<T>());
        }
    }

    void finish() const {
        std::string extra;
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) extra += (extra.empty() ? "" : ", ") + field(it.key());
        if (!extra.empty()) throw ParseError(origin_ + ": unknown key(s): " + extra);
    }

    [[noreturn]] void fail_field(const std::string& key, const std::string& what) const {
        throw ParseError(origin_ + ": field " + field(key) + ": " + what);
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(origin_ + ": " + (path_.empty() ? "document" : path_) + " " + what);
    }

    const json& value() const { return j_; }
    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    const json& j_;
    std::string path_;
    const std::string& origin_;
    std::set<std::string> seen_;
};

const char* family_name(Family f) { return f == Family::Appendix3D ? "appendix3d" : "appendix2d"; }

ordered_json number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, false);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
        throw ParseError(origin + ": line " + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
    }

    RunConfig c;
    Reader top(doc, "", origin);
    std::vector<std::string> bad;

    if (top.has("grid")) {
        Reader g = top.child("grid");
        g.get("dim", c.grid.dim);
        g.get("points", c.grid.points);
        g.get("length", c.grid.length);
        g.finish();
    }

    bool pbar_given = false, dim_given = false;
    if (top.has("params")) {
        Reader p = top.child("params");
        pbar_given = p.has("pbar");
        dim_given = p.has("dim");
        p.get("epsilon", c.params.epsilon);
        p.get("pbar", c.params.pbar);
        p.get("chi", c.params.chi);
        p.get("mu", c.params.mu);
        p.get("diff", c.params.diff);
        p.get("sigma", c.params.sigma);
        p.get("dim", c.params.dim);
        p.finish();
    }
    if (dim_given && c.params.dim != c.grid.dim) bad.push_back("params.dim must equal grid.dim");
    c.params.dim = c.grid.dim;

    if (!top.has("init")) {
        bad.push_back("init: exactly one init choice is required");
    } else {
        Reader in = top.child("init");
        static const char* kinds[] = {"appendix3d", "appendix2d", "manufactured", "checkpoint"};
        int count = 0;
        for (const char* k : kinds) count += in.has(k);
        if (count != 1) {
            bad.push_back("init: exactly one of appendix3d, appendix2d, manufactured, checkpoint is required (got " +
                          std::to_string(count) + ")");
            for (const char* k : kinds)
                if (in.has(k)) in.raw(k);
        }
        if (count == 1 && in.has("appendix3d")) {
            Reader a = in.child("appendix3d");
            c.init.kind = InitKind::Appendix3D;
            a.get("n", c.init.n);
            a.get("B", c.init.level);
            a.finish();
        } else if (count == 1 && in.has("appendix2d")) {
            Reader a = in.child("appendix2d");
            c.init.kind = InitKind::Appendix2D;
            a.get("n", c.init.n);
            a.get("A", c.init.level);
            a.get("f_scale", c.init.f_scale);
            a.finish();
        } else if (count == 1 && in.has("manufactured")) {
            Reader a = in.child("manufactured");
            c.init.kind = InitKind::Manufactured;
            a.get("seed", c.init.seed);
            a.get("amplitude", c.init.amplitude);
            a.finish();
        } else if (count == 1) {
            Reader a = in.child("checkpoint");
            c.init.kind = InitKind::Checkpoint;
            a.get("path", c.init.path);
            a.finish();
        }
        in.finish();
    }

    if (top.has("stepper")) {
        Reader s = top.child("stepper");
        if (s.has("scheme")) {
            std::string name;
            s.get("scheme", name);
            try {
                c.stepper.scheme = parse_scheme(name);
            } catch (const ValidationError& e) {
                bad.push_back(std::string("stepper.scheme: ") + e.what());
            }
        }
        if (s.has("dt")) {
            const json& v = s.raw("dt");
            if (v.is_string() && v.get<std::string>() == "auto") c.stepper.dt.reset();
            else if (v.is_number()) c.stepper.dt = v.get<double>();
            else s.fail_field("dt", "expected a number or \"auto\"");
        }
        s.get("cfl_safety", c.stepper.cfl_safety);
        s.get("t_end", c.stepper.t_end);
        s.get("report_every", c.stepper.report_every);
        s.get("positivity_floor", c.stepper.positivity_floor);
        s.finish();
    }

    if (top.has("gn_constants")) {
        Reader g = top.child("gn_constants");
        const bool derived = !g.has("c4") && !g.has("c5");
        GNConstants& k = c.gn;
        g.get("c1", k.c1), g.get("c2", k.c2), g.get("c3", k.c3), g.get("c4", k.c4), g.get("c5", k.c5);
        g.get("d1", k.d1), g.get("d2", k.d2), g.get("d3", k.d3), g.get("d4", k.d4), g.get("d5", k.d5);
        g.finish();
        if (derived) k = GNConstants::from_base(k.c1, k.c2, k.c3, k.d1, k.d2, k.d3, k.d4, k.d5);
    }

    if (top.has("outputs")) {
        Reader o = top.child("outputs");
        o.get("csv_path", c.outputs.csv_path);
        o.get("jsonl_path", c.outputs.jsonl_path);
        o.get("checkpoint_every", c.outputs.checkpoint_every);
        o.get("checkpoint_path", c.outputs.checkpoint_path);
        o.finish();
    }

    if (top.has("sweep")) {
        Reader s = top.child("sweep");
        s.get("epsilons", c.sweep.epsilons);
        s.get("t_probe", c.sweep.t_probe);
        s.finish();
    }

    if (top.has("scaling")) {
        Reader s = top.child("scaling");
        if (s.has("family")) {
            std::string f;
            s.get("family", f);
            if (f == "appendix3d") c.scaling.family = Family::Appendix3D;
            else if (f == "appendix2d") c.scaling.family = Family::Appendix2D;
            else bad.push_back("scaling.family must be appendix3d or appendix2d");
        }
        s.get("n_list", c.scaling.n_list);
        s.get("points", c.scaling.policy.points);
        s.get("length_factor", c.scaling.policy.length_factor);
        s.get("f_scale", c.scaling.policy.f_scale);
        s.finish();
    }
    top.finish();

    // invariants
    if (c.grid.dim < 1 || c.grid.dim > 3) bad.push_back("grid.dim must be 1, 2 or 3");
    if (c.grid.points < 4 || c.grid.points % 2) bad.push_back("grid.points must be even and >= 4");
    if (!(c.grid.length > 0.0) || !std::isfinite(c.grid.length)) bad.push_back("grid.length must be > 0");

    switch (c.init.kind) {
        case InitKind::Appendix3D:
        case InitKind::Appendix2D: {
            const bool three = c.init.kind == InitKind::Appendix3D;
            const char* nm = three ? "init.appendix3d" : "init.appendix2d";
            if (c.init.n < 1) bad.push_back(std::string(nm) + ".n must be >= 1");
            if (!(c.init.level > 0.0)) bad.push_back(std::string(nm) + (three ? ".B" : ".A") + " must be > 0");
            if (c.grid.dim != (three ? 3 : 2)) bad.push_back(std::string(nm) + " needs grid.dim = " + (three ? "3" : "2"));
            if (!three && c.init.f_scale < 0.0) bad.push_back("init.appendix2d.f_scale must be >= 0");
            if (pbar_given && c.params.pbar != c.init.level)
                bad.push_back(std::string("params.pbar must equal ") + nm + (three ? ".B" : ".A"));
            c.params.pbar = c.init.level;
            break;
        }
        case InitKind::Manufactured:
            if (!(c.init.amplitude >= 0.0) || !std::isfinite(c.init.amplitude))
                bad.push_back("init.manufactured.amplitude must be >= 0");
            break;
        case InitKind::Checkpoint:
            if (c.init.path.empty()) bad.push_back("init.checkpoint.path must be non-empty");
            break;
    }

    auto collect = [&](auto&& check) {
        try {
            check();
        } catch (const ValidationError& e) {
            bad.push_back(e.what());
        }
    };
    collect([&] { c.params.validate(); });
    collect([&] { c.stepper.validate(); });
    collect([&] { c.gn.validate(); });

    if (c.outputs.csv_path.empty()) bad.push_back("outputs.csv_path must be non-empty");
    if (c.outputs.jsonl_path.empty()) bad.push_back("outputs.jsonl_path must be non-empty");
    if (c.outputs.checkpoint_every < 0) bad.push_back("outputs.checkpoint_every must be >= 0");
    if (c.outputs.checkpoint_every > 0 && c.stepper.report_every > 0 &&
        c.outputs.checkpoint_every % c.stepper.report_every)
        bad.push_back("outputs.checkpoint_every must be a multiple of stepper.report_every");
    if (!(c.sweep.t_probe > 0.0)) bad.push_back("sweep.t_probe must be > 0");
    for (double e : c.sweep.epsilons)
        if (!(e > 0.0)) bad.push_back("sweep.epsilons must all be > 0");
    if (c.scaling.n_list.empty()) bad.push_back("scaling.n_list must be non-empty");
    for (int n : c.scaling.n_list)
        if (n < 1) bad.push_back("scaling.n_list entries must be >= 1");

    if (!bad.empty()) {
        std::string msg = origin + ": invalid config:";
        for (const auto& b : bad) msg += "\n  - " + b;
        throw ValidationError(msg);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open config file");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text, path);
}

std::string config_to_json(const RunConfig& c) {
    ordered_json j;
    j["grid"] = {{"dim", c.grid.dim}, {"points", c.grid.points}, {"length", c.grid.length}};
    j["params"] = {{"epsilon", c.params.epsilon}, {"pbar", c.params.pbar}, {"chi", c.params.chi},
                   {"mu", c.params.mu},           {"diff", c.params.diff}, {"sigma", c.params.sigma}};
    ordered_json init;
    switch (c.init.kind) {
        case InitKind::Appendix3D: init["appendix3d"] = {{"n", c.init.n}, {"B", c.init.level}}; break;
        case InitKind::Appendix2D:
            init["appendix2d"] = {{"n", c.init.n}, {"A", c.init.level}, {"f_scale", c.init.f_scale}};
            break;
        case InitKind::Manufactured:
            init["manufactured"] = {{"seed", c.init.seed}, {"amplitude", c.init.amplitude}};
            break;
        case InitKind::Checkpoint: init["checkpoint"] = {{"path", c.init.path}}; break;
    }
    j["init"] = init;
    ordered_json st;
    st["scheme"] = scheme_name(c.stepper.scheme);
    st["dt"] = c.stepper.dt ? ordered_json(*c.stepper.dt) : ordered_json("auto");
    st["cfl_safety"] = c.stepper.cfl_safety;
    st["t_end"] = c.stepper.t_end;
    st["report_every"] = c.stepper.report_every;
    st["positivity_floor"] = c.stepper.positivity_floor;
    j["stepper"] = st;
    const GNConstants& k = c.gn;
    j["gn_constants"] = {{"c1", k.c1}, {"c2", k.c2}, {"c3", k.c3}, {"c4", k.c4}, {"c5", k.c5},
                         {"d1", k.d1}, {"d2", k.d2}, {"d3", k.d3}, {"d4", k.d4}, {"d5", k.d5}};
    j["outputs"] = {{"csv_path", c.outputs.csv_path},
                    {"jsonl_path", c.outputs.jsonl_path},
                    {"checkpoint_every", c.outputs.checkpoint_every},
                    {"checkpoint_path", c.outputs.checkpoint_path}};
    j["sweep"] = {{"epsilons", c.sweep.epsilons}, {"t_probe", c.sweep.t_probe}};
    j["scaling"] = {{"family", family_name(c.scaling.family)},
                    {"n_list", c.scaling.n_list},
                    {"points", c.scaling.policy.points},
                    {"length_factor", c.scaling.policy.length_factor},
                    {"f_scale", c.scaling.policy.f_scale}};
    return j.dump(2);
}

GridPtr make_grid(const GridSpec& spec) { return make_grid(spec.dim, spec.points, spec.length); }

State make_initial_state(const RunConfig& c) {
    GridPtr g = make_grid(c.grid);
    switch (c.init.kind) {
        case InitKind::Appendix3D: return init_appendix_3d(c.init.n, c.init.level, g);
        case InitKind::Appendix2D:
            return init_appendix_2d(c.init.n, c.init.level, c.init.f_scale > 0 ? c.init.f_scale : kDefaultFScale, g);
        case InitKind::Manufactured: return init_manufactured(g, c.init.seed, c.init.amplitude, c.params.pbar);
        case InitKind::Checkpoint: {
            State s = load_checkpoint(c.init.path).first;
            if (!(*s.grid() == *g))
                throw ValidationError("checkpoint " + c.init.path + " was written on a different grid than grid");
            return s;
        }
    }
    throw ValidationError("unknown init kind");
}

// ---------------------------------------------------------------- checkpoint

namespace {

constexpr char kMagic[8] = {'B', 'L', 'L', 'C', 'K', 'P', 'T', '\0'};

template <class T>
void put(std::string& buf, T value) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    buf.append(reinterpret_cast<const char*>(b), sizeof(T));
}

class Cursor {
public:
    Cursor(const std::string& buf, std::size_t end) : buf_(buf), end_(end) {}

    template <class T>
    T take() {
        need(sizeof(T));
        unsigned char b[sizeof(T)];
        std::memcpy(b, buf_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
        pos_ += sizeof(T);
        T v;
        std::memcpy(&v, b, sizeof(T));
        return v;
    }

    std::string bytes(std::size_t n) {
        need(n);
        std::string s = buf_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }
    std::size_t pos() const { return pos_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > end_) throw ChecksumMismatch("checkpoint payload is shorter than its header claims");
    }
    const std::string& buf_;
    std::size_t end_;
    std::size_t pos_ = 0;
};

std::uint32_t checksum(const std::string& buf, std::size_t n) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(n));
    return static_cast<std::uint32_t>(crc);
}

}  // namespace

void save_checkpoint(const State& s, const RunConfig& config, const std::string& path) {
    const Grid& g = *s.grid();
    std::string buf(kMagic, sizeof kMagic);
    put<std::uint32_t>(buf, kCheckpointVersion);
    const std::string cfg = config_to_json(config);
    put<std::uint64_t>(buf, cfg.size());
    buf += cfg;
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.dim()));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.points()));
    put<double>(buf, g.length());
    put<double>(buf, s.time);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(1 + g.dim()));
    for (double x : s.p.values) put<double>(buf, x);
    for (const auto& c : s.v.components)
        for (double x : c.values) put<double>(buf, x);
    put<std::uint32_t>(buf, checksum(buf, buf.size()));
    write_text_file(path, buf);
}

std::pair<State, RunConfig> load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open checkpoint");
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < sizeof kMagic + 4) throw ChecksumMismatch(path + ": checkpoint is truncated");
    if (std::memcmp(buf.data(), kMagic, sizeof kMagic) != 0) throw ParseError(path + ": not a checkpoint file");

    Cursor head(buf, buf.size());
    head.skip(sizeof kMagic);
    const auto version = head.take<std::uint32_t>();
    if (version != kCheckpointVersion)
        throw VersionMismatch(path + ": checkpoint format version " + std::to_string(version) +
                              ", this build reads version " + std::to_string(kCheckpointVersion));
    if (buf.size() < sizeof kMagic + 8) throw ChecksumMismatch(path + ": checkpoint is truncated");
    const std::size_t body = buf.size() - 4;
    Cursor tail(buf, buf.size());
    tail.skip(body);
    if (tail.take<std::uint32_t>() != checksum(buf, body))
        throw ChecksumMismatch(path + ": checkpoint checksum does not match its contents");

    Cursor c(buf, body);
    c.skip(sizeof kMagic + 4);
    const auto cfg_len = c.take<std::uint64_t>();
    if (cfg_len > body) throw ChecksumMismatch(path + ": checkpoint config length is inconsistent");
    RunConfig config = parse_config(c.bytes(cfg_len), path + " (embedded config)");
    const int dim = static_cast<int>(c.take<std::uint32_t>());
    const int points = static_cast<int>(c.take<std::uint32_t>());
    const double length = c.take<double>();
    const double time = c.take<double>();
    const auto ncomp = c.take<std::uint32_t>();
    GridPtr g = make_grid(dim, points, length);
    if (ncomp != static_cast<std::uint32_t>(1 + dim))
        throw ChecksumMismatch(path + ": checkpoint component count does not match its grid");
    auto field = [&] {
        std::vector<double> vals(g->size());
        for (auto& x : vals) x = c.take<double>();
        return ScalarField(g, std::move(vals));
    };
    ScalarField p = field();
    std::vector<ScalarField> comps;
    for (int a = 0; a < dim; ++a) comps.push_back(field());
    if (c.pos() != body) throw ChecksumMismatch(path + ": checkpoint has trailing bytes beyond its grid");
    return {State(std::move(p), VectorField(std::move(comps)), time), config};
}

// ------------------------------------------------------------------- reports

std::string csv_header(int dim) {
    std::string h = "time,l2_p,l2_v,h1,h2,h3,curl,min_density,entropy,";
    h += dim == 3 ? "kappa_t,N1_t,N2_t,N3_t" : "E3,D3,E4,D4,E5,D5";
    return h + ",lp4_p,lp4_v";
}

std::string csv_row(const EnergyReport& r) {
    std::vector<double> cols{r.time, r.l2_p, r.l2_v, r.h1, r.h2, r.h3, r.curl, r.min_density, r.entropy};
    if (r.dim == 3) cols.insert(cols.end(), {r.kappa_t, r.N1_t, r.N2_t, r.N3_t});
    else cols.insert(cols.end(), {r.E3, r.D3, r.E4, r.D4, r.E5, r.D5});
    cols.insert(cols.end(), {r.lp4_p, r.lp4_v});
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + fmt_double(cols[i]);
    return out;
}

std::string report_json(const EnergyReport& r) {
    ordered_json j;
    j["time"] = number(r.time);
    j["l2_p"] = number(r.l2_p);
    j["l2_v"] = number(r.l2_v);
    j["h1"] = number(r.h1);
    j["h2"] = number(r.h2);
    j["h3"] = number(r.h3);
    j["curl"] = number(r.curl);
    j["min_density"] = number(r.min_density);
    j["entropy"] = number(r.entropy);
    if (r.dim == 3) {
        j["kappa_t"] = number(r.kappa_t);
        j["N1_t"] = number(r.N1_t);
        j["N2_t"] = number(r.N2_t);
        j["N3_t"] = number(r.N3_t);
    } else {
        j["E3"] = number(r.E3);
        j["D3"] = number(r.D3);
        j["E4"] = number(r.E4);
        j["D4"] = number(r.D4);
        j["E5"] = number(r.E5);
        j["D5"] = number(r.D5);
    }
    j["lp4_p"] = number(r.lp4_p);
    j["lp4_v"] = number(r.lp4_v);
    return j.dump();
}

namespace {

ordered_json numbers(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

}  // namespace

std::string sweep_json(const SweepResult& r) {
    ordered_json j;
    j["epsilons"] = numbers(r.epsilons);
    j["t_probe"] = r.t_probe;
    j["dt"] = r.dt;
    j["diff_h1_sq"] = numbers(r.diff_h1_sq);
    j["diff_lap_sq"] = numbers(r.diff_lap_sq);
    j["failed"] = r.failed;
    j["errors"] = r.errors;
    j["slope_h1"] = number(r.slope_h1);
    j["slope_lap"] = number(r.slope_lap);
    j["fitted_prefactors"] = {number(r.fitted_prefactors[0]), number(r.fitted_prefactors[1])};
    j["fitted_points"] = r.fitted_points;
    return j.dump(2);
}

std::string sweep_csv(const SweepResult& r) {
    std::string out = "epsilon,diff_h1_sq,diff_lap_sq,failed\n";
    for (std::size_t i = 0; i < r.epsilons.size(); ++i)
        out += fmt_double(r.epsilons[i]) + "," + fmt_double(r.diff_h1_sq[i]) + "," + fmt_double(r.diff_lap_sq[i]) +
               "," + (r.failed[i] ? "1" : "0") + "\n";
    return out;
}

std::string decay_json(const DecayResult& r) {
    ordered_json j;
    j["times"] = numbers(r.times);
    j["grad_norm_sq"] = numbers(r.grad_norm_sq);
    j["winf_norm"] = numbers(r.winf_norm);
    j["ratio_final"] = number(r.ratio_final);
    j["degenerate"] = r.degenerate;
    j["smallness_passed"] = r.smallness_passed;
    return j.dump(2);
}

std::string decay_csv(const DecayResult& r) {
    std::string out = "time,grad_norm_sq,winf_norm\n";
    for (std::size_t i = 0; i < r.times.size(); ++i)
        out += fmt_double(r.times[i]) + "," + fmt_double(r.grad_norm_sq[i]) + "," + fmt_double(r.winf_norm[i]) + "\n";
    return out;
}

std::string scaling_json(const ScalingTable& t) {
    ordered_json j;
    j["family"] = family_name(t.family);
    j["n_list"] = t.n_list;
    ordered_json vals, ex;
    for (const auto& [k, v] : t.values) vals[k] = numbers(v);
    for (const auto& [k, f] : t.exponents)
        ex[k] = {{"slope", number(f.slope)}, {"intercept", number(f.intercept)}, {"residual", number(f.residual)}};
    j["values"] = vals;
    j["exponents"] = ex;
    j["errors"] = t.errors;
    return j.dump(2);
}

std::string scaling_csv(const ScalingTable& t) {
    std::string out = "n";
    for (const auto& [k, v] : t.values) out += "," + k;
    out += "\n";
    for (std::size_t i = 0; i < t.n_list.size(); ++i) {
        out += std::to_string(t.n_list[i]);
        for (const auto& [k, v] : t.values) out += "," + fmt_double(v[i]);
        out += "\n";
    }
    return out;
}

std::string checks_json(const std::vector<CheckResult>& checks) {
    ordered_json a = ordered_json::array();
    for (const auto& c : checks) a.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return a.dump(2);
}

ReportWriter::ReportWriter(const std::string& csv_path, const std::string& jsonl_path, int dim)
    : csv_(csv_path), jsonl_(jsonl_path) {
    if (!csv_) throw ValidationError(csv_path + ": cannot open for writing");
    if (!jsonl_) throw ValidationError(jsonl_path + ": cannot open for writing");
    csv_ << csv_header(dim) << '\n';
}

void ReportWriter::write(const EnergyReport& r) {
    csv_ << csv_row(r) << '\n';
    jsonl_ << report_json(r) << '\n';
    csv_.flush();
    jsonl_.flush();
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError(path + ": cannot open for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw ValidationError(path + ": write failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw ValidationError(path + ": " + ec.message());
}

}  // namespace bll
