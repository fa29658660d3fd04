#include "cfier/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <set>
#include <sstream>

namespace cfier {

namespace {

[[noreturn]] void fail(int line, const std::string& msg)
{
    throw ConfigError(fmt::format("line {}: {}", line, msg));
}

const char* type_name(const ConfigNode& n)
{
    switch (n.value.index()) {
    case 0: return "number";
    case 1: return "boolean";
    case 2: return "string";
    case 3: return "list";
    default: return "block";
    }
}

template <class T>
const T& expect(const ConfigNode& n, const std::string& what, const char* type)
{
    if (const T* v = std::get_if<T>(&n.value))
        return *v;
    fail(n.line, fmt::format("{} must be a {}, got a {}", what, type, type_name(n)));
}

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    ConfigBlock document()
    {
        ConfigBlock root = entries(false);
        skip_separators();
        if (pos_ < s_.size())
            fail(line_, fmt::format("unexpected '{}'", s_[pos_]));
        return root;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1;

    static bool word_char(char c)
    {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-'
               || c == '+' || c == ':' || c == '/';
    }

    // spaces and comments, optionally newlines
    void skip(bool newlines)
    {
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n')
                    ++pos_;
            } else if (c == '\n' && newlines) {
                ++line_;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else {
                break;
            }
        }
    }

    void skip_separators()
    {
        for (;;) {
            skip(true);
            if (pos_ < s_.size() && s_[pos_] == ';')
                ++pos_;
            else
                return;
        }
    }

    std::string word()
    {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && word_char(s_[pos_]))
            ++pos_;
        if (start == pos_)
            fail(line_, pos_ < s_.size() ? fmt::format("unexpected '{}'", s_[pos_])
                                         : std::string("unexpected end of input"));
        return s_.substr(start, pos_ - start);
    }

    ConfigBlock entries(bool nested)
    {
        ConfigBlock block;
        for (;;) {
            skip_separators();
            if (pos_ >= s_.size()) {
                if (nested)
                    fail(line_, "missing '}'");
                return block;
            }
            if (s_[pos_] == '}') {
                if (!nested)
                    fail(line_, "unmatched '}'");
                ++pos_;
                return block;
            }
            const int line = line_;
            const std::string key = word();
            skip(false);
            ConfigNode node;
            node.line = line;
            if (pos_ < s_.size() && s_[pos_] == '{') {
                ++pos_;
                node.value = std::make_shared<ConfigBlock>(entries(true));
            } else if (pos_ < s_.size() && s_[pos_] == '=') {
                ++pos_;
                skip(false);
                node = value();
                skip(false);
                if (pos_ < s_.size() && s_[pos_] != '\n' && s_[pos_] != ';' && s_[pos_] != '}')
                    fail(line_, fmt::format("unexpected '{}' after the value of {}", s_[pos_], key));
            } else {
                fail(line, fmt::format("expected '=' or '{{' after {}", key));
            }
            if (!block.emplace(key, std::move(node)).second)
                fail(line, fmt::format("duplicate key {}", key));
        }
    }

    ConfigNode value()
    {
        ConfigNode node;
        node.line = line_;
        if (pos_ >= s_.size())
            fail(line_, "missing value");
        const char c = s_[pos_];
        if (c == '[') {
            ++pos_;
            ConfigList items;
            skip(true);
            if (pos_ < s_.size() && s_[pos_] == ']') {
                ++pos_;
                node.value = std::move(items);
                return node;
            }
            for (;;) {
                skip(true);
                items.push_back(value());
                skip(true);
                if (pos_ < s_.size() && s_[pos_] == ',') {
                    ++pos_;
                } else if (pos_ < s_.size() && s_[pos_] == ']') {
                    ++pos_;
                    break;
                } else {
                    fail(line_, "expected ',' or ']' in list");
                }
            }
            node.value = std::move(items);
        } else if (c == '"') {
            const std::size_t end = s_.find('"', pos_ + 1);
            if (end == std::string::npos || s_.find('\n', pos_) < end)
                fail(line_, "unterminated string");
            node.value = s_.substr(pos_ + 1, end - pos_ - 1);
            pos_ = end + 1;
        } else {
            const std::string w = word();
            double d = 0.0;
            const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), d);
            if (ec == std::errc() && ptr == w.data() + w.size())
                node.value = d;
            else if (w == "true" || w == "false")
                node.value = (w == "true");
            else
                node.value = w;
        }
        return node;
    }
};

// Tracks which keys of a block were consumed so leftovers can be rejected.
class BlockReader {
public:
    BlockReader(const ConfigBlock& b, std::string path) : b_(b), path_(std::move(path)) {}

    const ConfigNode* find(const std::string& key)
    {
        used_.insert(key);
        const auto it = b_.find(key);
        return it == b_.end() ? nullptr : &it->second;
    }
    const ConfigNode& get(const std::string& key)
    {
        if (const ConfigNode* n = find(key))
            return *n;
        throw ConfigError(fmt::format("missing key {}", name(key)));
    }
    std::string name(const std::string& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }
    void finish() const
    {
        for (const auto& [key, node] : b_)
            if (!used_.count(key))
                fail(node.line, fmt::format("unknown key {}", name(key)));
    }

private:
    const ConfigBlock& b_;
    std::string path_;
    std::set<std::string> used_;
};

Vec2 vec2(const ConfigNode& n, const std::string& what)
{
    const ConfigList& l = n.list(what);
    if (l.size() != 2)
        fail(n.line, fmt::format("{} must have two entries", what));
    return {l[0].number(what), l[1].number(what)};
}

std::vector<double> numbers(const ConfigNode& n, const std::string& what)
{
    if (std::holds_alternative<double>(n.value))
        return {n.number(what)};
    std::vector<double> out;
    for (const ConfigNode& e : n.list(what))
        out.push_back(e.number(what));
    return out;
}

CurveSpec read_geometry(BlockReader& r)
{
    const ConfigNode& g = r.get("geometry");
    const std::string& name = g.string(r.name("geometry"));
    const ConfigNode* v = r.find("vertices");
    if (name == "polygon") {
        if (!v)
            throw ConfigError(fmt::format("{} needs {}", r.name("geometry"), r.name("vertices")));
        std::vector<Vec2> pts;
        for (const ConfigNode& e : v->list(r.name("vertices")))
            pts.push_back(vec2(e, r.name("vertices")));
        return CurveSpec::polygon("polygon", pts);
    }
    if (v)
        fail(v->line, "vertices are only read for geometry = polygon");
    return named_curve(name);
}

struct ImpedanceConfig {
    ImpedanceSpec spec;
    std::vector<double> ik;
    std::optional<cplx> transmission_shift;
};

ImpedanceConfig read_impedance(const ConfigNode& node, Side side)
{
    BlockReader r(node.block("problem.impedance"), "problem.impedance");
    const std::string type = r.get("type").string(r.name("type"));
    ImpedanceConfig out;
    auto zeta_or_ik = [&](bool list) {
        const ConfigNode* zeta = r.find("zeta");
        const ConfigNode* ik = r.find("ik");
        if (bool(zeta) == bool(ik))
            throw ConfigError(fmt::format("{} needs exactly one of zeta, ik", r.name("type")));
        if (ik) {
            out.ik = numbers(*ik, r.name("ik"));
            if (!list && out.ik.size() != 1)
                fail(ik->line, "constant impedance takes a single ik factor");
        }
        return zeta;
    };
    if (type == "constant") {
        const ConfigNode* zeta = zeta_or_ik(false);
        out.spec = ConstantImpedance{zeta ? zeta->complex(r.name("zeta")) : cplx{}};
    } else if (type == "piecewise") {
        PiecewiseImpedance pw;
        if (const ConfigNode* zeta = zeta_or_ik(true))
            for (const ConfigNode& e : zeta->list(r.name("zeta")))
                pw.zeta.push_back(e.complex(r.name("zeta")));
        else
            pw.zeta.assign(out.ik.size(), cplx{});
        out.spec = pw;
    } else if (type == "transmission") {
        const ConfigNode* kappa = r.find("kappa");
        const ConfigNode* shift = r.find("kappa_shift");
        if (kappa && shift)
            fail(shift->line, "give kappa or kappa_shift, not both");
        const int sign = side == Side::exterior ? 1 : -1;
        if (kappa) {
            out.spec = TransmissionImpedance{sign, Wavenumber(kappa->complex(r.name("kappa")))};
        } else {
            out.transmission_shift = shift ? shift->complex(r.name("kappa_shift")) : I_unit;
            out.spec = TransmissionImpedance{sign, Wavenumber(1.0)};
        }
    } else if (type == "blended") {
        BlendedImpedance b;
        for (const ConfigNode& e : r.get("kappas").list(r.name("kappas")))
            b.kappas.emplace_back(e.complex(r.name("kappas")));
        for (const ConfigNode& e : r.get("patches").list(r.name("patches"))) {
            std::vector<int> patch;
            for (const ConfigNode& s : e.list(r.name("patches")))
                patch.push_back(s.integer(r.name("patches")));
            b.patches.push_back(patch);
        }
        if (const ConfigNode* o = r.find("overlap"))
            b.overlap = o->number(r.name("overlap"));
        out.spec = b;
    } else {
        fail(r.get("type").line,
             fmt::format("unknown impedance type {} (constant, piecewise, transmission, blended)",
                         type));
    }
    r.finish();
    return out;
}

IncidenceSpec read_incidence(const ConfigNode& node)
{
    BlockReader r(node.block("incidence"), "incidence");
    const ConfigNode& t = r.get("type");
    const std::string& type = t.string(r.name("type"));
    IncidenceSpec out;
    if (type == "plane_wave") {
        out = PlaneWave{vec2(r.get("direction"), r.name("direction"))};
    } else if (type == "point_source") {
        PointSource ps{vec2(r.get("position"), r.name("position"))};
        if (const ConfigNode* s = r.find("strength"))
            ps.strength = s->complex(r.name("strength"));
        out = ps;
    } else {
        fail(t.line, fmt::format("unknown incidence type {} (plane_wave, point_source)", type));
    }
    r.finish();
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p)
{
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

} // namespace

double ConfigNode::number(const std::string& what) const
{
    return expect<double>(*this, what, "number");
}

int ConfigNode::integer(const std::string& what) const
{
    const double d = number(what);
    if (d != std::floor(d) || std::abs(d) > 1e9)
        fail(line, fmt::format("{} must be an integer", what));
    return int(d);
}

bool ConfigNode::boolean(const std::string& what) const
{
    return expect<bool>(*this, what, "boolean");
}

const std::string& ConfigNode::string(const std::string& what) const
{
    return expect<std::string>(*this, what, "string");
}

const ConfigList& ConfigNode::list(const std::string& what) const
{
    return expect<ConfigList>(*this, what, "list");
}

const ConfigBlock& ConfigNode::block(const std::string& what) const
{
    return *expect<std::shared_ptr<ConfigBlock>>(*this, what, "block");
}

cplx ConfigNode::complex(const std::string& what) const
{
    if (std::holds_alternative<double>(value))
        return number(what);
    const ConfigList& l = list(what);
    if (l.size() != 2)
        fail(line, fmt::format("{} must be a number or [re, im]", what));
    return {l[0].number(what), l[1].number(what)};
}

ConfigBlock parse_config(const std::string& text)
{
    return Parser(text).document();
}

ProblemSpec ExperimentConfig::problem_for(std::size_t i) const
{
    if (i >= sizes.size())
        throw DimensionError(fmt::format("run {} of {}", i, sizes.size()));
    ProblemSpec p = problem;
    p.n = sizes[i] / 2;
    p.k = Wavenumber(ks[i]);
    if (kappa_shift)
        p.kappa = Wavenumber(ks[i] + *kappa_shift);
    if (!ik_factors.empty()) {
        if (auto* c = std::get_if<ConstantImpedance>(&p.impedance))
            c->zeta = I_unit * ik_factors[0] * ks[i];
        if (auto* pw = std::get_if<PiecewiseImpedance>(&p.impedance))
            for (std::size_t j = 0; j < pw->zeta.size(); ++j)
                pw->zeta[j] = I_unit * ik_factors[j] * ks[i];
    }
    if (transmission_shift)
        std::get<TransmissionImpedance>(p.impedance).kappa = Wavenumber(ks[i] + *transmission_shift);
    return p;
}

ExperimentConfig load_experiment(const ConfigBlock& root, const std::string& name,
                                 const std::filesystem::path& base_dir)
{
    ExperimentConfig cfg;
    BlockReader top(root, "");
    cfg.name = name;
    if (const ConfigNode* n = top.find("name"))
        cfg.name = n->string("name");

    BlockReader pr(top.get("problem").block("problem"), "problem");
    const std::string side = pr.get("side").string(pr.name("side"));
    if (side != "interior" && side != "exterior")
        fail(pr.get("side").line, "side must be interior or exterior");
    cfg.problem.side = side == "exterior" ? Side::exterior : Side::interior;
    cfg.problem.geometry = read_geometry(pr);
    if (const ConfigNode* p = pr.find("p"))
        cfg.problem.sigmoid.p = p->integer(pr.name("p"));
    if (const ConfigNode* w = pr.find("weighted"))
        cfg.problem.weighted = w->boolean(pr.name("weighted"));

    const ConfigNode& sizes = pr.get("sizes");
    for (double s : numbers(sizes, pr.name("sizes"))) {
        if (s != std::floor(s) || s < 4 || int(s) % 2 != 0)
            fail(sizes.line, fmt::format("2n = {} must be an even integer >= 4", s));
        cfg.sizes.push_back(int(s));
    }
    if (cfg.sizes.empty())
        fail(sizes.line, "the list of 2n values is empty");
    cfg.ks = numbers(pr.get("k"), pr.name("k"));
    if (cfg.ks.empty())
        fail(pr.get("k").line, "the list of wavenumbers is empty");
    if (cfg.ks.size() == 1)
        cfg.ks.assign(cfg.sizes.size(), cfg.ks[0]);
    else if (cfg.sizes.size() == 1)
        cfg.sizes.assign(cfg.ks.size(), cfg.sizes[0]);
    if (cfg.ks.size() != cfg.sizes.size())
        fail(pr.get("k").line, fmt::format("{} wavenumbers for {} sizes", cfg.ks.size(),
                                           cfg.sizes.size()));
    for (double k : cfg.ks)
        if (!(k > 0.0))
            fail(pr.get("k").line, "wavenumbers must be positive");

    const ConfigNode* kappa = pr.find("kappa");
    const ConfigNode* shift = pr.find("kappa_shift");
    if (kappa && shift)
        fail(shift->line, "give kappa or kappa_shift, not both");
    if (kappa)
        cfg.problem.kappa = Wavenumber(kappa->complex(pr.name("kappa")));
    else
        cfg.kappa_shift = shift ? shift->complex(pr.name("kappa_shift")) : I_unit;

    const ImpedanceConfig imp = read_impedance(pr.get("impedance"), cfg.problem.side);
    cfg.problem.impedance = imp.spec;
    cfg.ik_factors = imp.ik;
    cfg.transmission_shift = imp.transmission_shift;
    pr.finish();

    if (const ConfigNode* inc = top.find("incidence"))
        cfg.incidence = read_incidence(*inc);

    if (const ConfigNode* s = top.find("solver")) {
        BlockReader sr(s->block("solver"), "solver");
        if (const ConfigNode* t = sr.find("tol"))
            cfg.tol = t->number(sr.name("tol"));
        if (const ConfigNode* m = sr.find("maxit"))
            cfg.maxit = m->integer(sr.name("maxit"));
        if (const ConfigNode* f = sr.find("reference_factor"))
            cfg.reference_factor = f->integer(sr.name("reference_factor"));
        sr.finish();
        if (!(cfg.tol > 0.0 && cfg.tol < 1.0))
            throw ConfigError("solver.tol must lie in (0, 1)");
        if (cfg.maxit < 0)
            throw ConfigError("solver.maxit must be >= 0");
        if (cfg.reference_factor < 2)
            throw ConfigError("solver.reference_factor must be >= 2");
    }

    cfg.csv = base_dir / (cfg.name + ".csv");
    if (const ConfigNode* o = top.find("outputs")) {
        BlockReader orr(o->block("outputs"), "outputs");
        if (const ConfigNode* c = orr.find("csv"))
            cfg.csv = resolve(base_dir, c->string(orr.name("csv")));
        if (const ConfigNode* h = orr.find("history"))
            cfg.history_dir = resolve(base_dir, h->string(orr.name("history")));
        if (const ConfigNode* f = orr.find("far_field"))
            cfg.far_field_dir = resolve(base_dir, f->string(orr.name("far_field")));
        if (const ConfigNode* d = orr.find("dump_matrices"))
            cfg.dump_matrices = d->boolean(orr.name("dump_matrices"));
        orr.finish();
    }
    top.finish();

    // resolve every run once so impedance/problem errors surface at load time
    const int segments = int(cfg.problem.geometry.segments().size());
    if (!cfg.ik_factors.empty() && std::holds_alternative<PiecewiseImpedance>(cfg.problem.impedance)
        && int(cfg.ik_factors.size()) != segments)
        throw ConfigError(fmt::format("{} ik factors for {} segments", cfg.ik_factors.size(),
                                      segments));
    for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
        const ProblemSpec p = cfg.problem_for(i);
        validate_problem(p);
        build_grid(p.geometry, p.sigmoid, p.n);
    }
    return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot read {}", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return load_experiment(parse_config(ss.str()), path.stem().string(),
                               std::filesystem::current_path());
    } catch (const std::logic_error& e) {
        // domain and dimension errors from constructing the problem
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

} // namespace cfier
