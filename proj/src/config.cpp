#include "btz/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "btz/errors.hpp"

namespace btz {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size())
        fail(ErrorCode::InvalidInput, "config key '" + key + "' expects a number, got '" + v + "'");
    return out;
}

long long to_int(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    long long out = 0;
    try {
        out = std::stoll(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size())
        fail(ErrorCode::InvalidInput, "config key '" + key + "' expects an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    fail(ErrorCode::InvalidInput, "config key '" + key + "' expects a boolean, got '" + v + "'");
}

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Field {
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define BTZ_DOUBLE(name)                                                                   \
    {#name,                                                                                \
     {[](RunConfig& c, const std::string& k, const std::string& v) { c.name = to_double(k, v); }, \
      [](const RunConfig& c) { return num(c.name); }}}
#define BTZ_INT(name)                                                                      \
    {#name,                                                                                \
     {[](RunConfig& c, const std::string& k, const std::string& v) {                       \
          c.name = static_cast<decltype(c.name)>(to_int(k, v));                            \
      },                                                                                   \
      [](const RunConfig& c) { return std::to_string(c.name); }}}
#define BTZ_BOOL(name)                                                                     \
    {#name,                                                                                \
     {[](RunConfig& c, const std::string& k, const std::string& v) { c.name = to_bool(k, v); }, \
      [](const RunConfig& c) { return std::string(c.name ? "true" : "false"); }}}

const std::map<std::string, Field>& fields()
{
    static const std::map<std::string, Field> table = {
        BTZ_INT(seed),
        BTZ_DOUBLE(kappa0),
        BTZ_INT(max_doublings),
        BTZ_DOUBLE(cert_margin),
        BTZ_DOUBLE(t_min),
        BTZ_DOUBLE(t_max),
        BTZ_INT(t_samples),
        BTZ_INT(grid_n),
        BTZ_INT(equivariance_samples),
        BTZ_BOOL(normalize_theta),
        BTZ_DOUBLE(spear_initial_radius),
        BTZ_INT(spear_max_shrinks),
        BTZ_INT(spear_angular_samples),
        BTZ_INT(spear_radial_samples),
        BTZ_DOUBLE(spear_vertex_t),
        BTZ_INT(curves),
        {"leaves",
         {[](RunConfig& c, const std::string& k, const std::string& v) {
              c.leaves.clear();
              std::stringstream ss(v);
              std::string item;
              while (std::getline(ss, item, ','))
                  if (!trim(item).empty())
                      c.leaves.push_back(to_double(k, trim(item)));
          },
          [](const RunConfig& c) {
              std::string out;
              for (double t : c.leaves)
                  out += (out.empty() ? "" : ",") + num(t);
              return out;
          }}},
        BTZ_DOUBLE(cone_margin),
        BTZ_DOUBLE(trace_t_start),
        BTZ_DOUBLE(trace_t_end),
        BTZ_DOUBLE(trace_step),
        BTZ_INT(deck_kmax),
        BTZ_INT(mesh_resolution),
        BTZ_INT(surgery_radial_samples),
        BTZ_INT(surgery_angular_samples),
    };
    return table;
}

#undef BTZ_DOUBLE
#undef BTZ_INT
#undef BTZ_BOOL

void check(const RunConfig& c)
{
    auto require = [](bool ok, const std::string& what) {
        if (!ok)
            fail(ErrorCode::InvalidInput, "config: " + what);
    };
    require(c.kappa0 >= 0.0, "kappa0 must be >= 0");
    require(c.max_doublings >= 0, "max_doublings must be >= 0");
    require(c.cert_margin > 0.0, "cert_margin must be positive");
    require(c.t_min > 0.0 && c.t_max > c.t_min, "need 0 < t_min < t_max");
    require(c.t_samples >= 1 && c.grid_n >= 1, "sample counts must be positive");
    require(c.spear_initial_radius > 0.0, "spear_initial_radius must be positive");
    require(c.spear_vertex_t > 0.0, "spear_vertex_t must be positive");
    require(c.curves >= 0, "curves must be >= 0");
    require(c.trace_t_start > 0.0 && c.trace_t_end > c.trace_t_start,
            "need 0 < trace_t_start < trace_t_end");
    require(c.trace_step > 0.0, "trace_step must be positive");
    require(c.mesh_resolution >= 1, "mesh_resolution must be >= 1");
}

}  // namespace

RunConfig parse_config(const std::string& text, RunConfig base)
{
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::InvalidInput, "config line " + std::to_string(lineno) + " has no '='");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto it = fields().find(key);
        if (it == fields().end())
            fail(ErrorCode::InvalidInput, "unknown config key '" + key + "'");
        it->second.set(base, key, value);
    }
    check(base);
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::InvalidInput, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), base);
}

std::string format_config(const RunConfig& cfg)
{
    std::string out;
    for (const auto& [key, field] : fields())
        out += key + " = " + field.get(cfg) + "\n";
    return out;
}

}  // namespace btz
