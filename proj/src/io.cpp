#include "fdrl/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fdrl {

namespace {

using nlohmann::json;

void byteswap_if_needed(std::uint64_t* data, std::size_t n) {
    if constexpr (std::endian::native == std::endian::little) {
        (void)data;
        (void)n;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t x = data[i];
            x = ((x & 0x00000000FFFFFFFFULL) << 32) | ((x >> 32) & 0x00000000FFFFFFFFULL);
            x = ((x & 0x0000FFFF0000FFFFULL) << 16) | ((x >> 16) & 0x0000FFFF0000FFFFULL);
            x = ((x & 0x00FF00FF00FF00FFULL) << 8) | ((x >> 8) & 0x00FF00FF00FF00FFULL);
            data[i] = x;
        }
    }
}

void atomic_write_bytes(const std::filesystem::path& path, const std::string& bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw invalid_spec_error("cannot open for writing: " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw invalid_spec_error("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

json read_header(std::istream& in, const std::filesystem::path& path) {
    std::string line;
    if (!std::getline(in, line))
        throw invalid_spec_error("missing header line: " + path.string());
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw invalid_spec_error("bad header in " + path.string() + ": " + e.what());
    }
}

std::vector<int> dims_from_header(const json& h, const std::filesystem::path& path) {
    if (!h.contains("dims") || !h["dims"].is_array())
        throw invalid_spec_error("header lacks dims: " + path.string());
    std::vector<int> dims = h["dims"].get<std::vector<int>>();
    validate_dims(dims);
    return dims;
}

bool is_csv(const std::filesystem::path& path) { return path.extension() == ".csv"; }

Lattice read_lattice_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw invalid_spec_error("cannot open: " + path.string());
    std::vector<double> values;
    std::string line;
    int rows = 0;
    long cols = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        long c = 0;
        while (std::getline(ss, cell, ',')) {
            values.push_back(std::stod(cell));
            ++c;
        }
        if (cols >= 0 && c != cols)
            throw invalid_spec_error("ragged CSV lattice: " + path.string());
        cols = c;
        ++rows;
    }
    if (rows == 0 || cols <= 0) throw invalid_spec_error("empty CSV lattice: " + path.string());
    Lattice lat({rows, static_cast<int>(cols)});
    lat.values = std::move(values);
    return lat;
}

void write_lattice_csv(const std::filesystem::path& path, const Lattice& lat) {
    if (lat.dims.size() != 2)
        throw invalid_spec_error("CSV lattice output supports 2D only");
    std::ostringstream out;
    out.precision(17);
    for (int i = 0; i < lat.dims[0]; ++i) {
        for (int j = 0; j < lat.dims[1]; ++j) {
            if (j) out << ',';
            out << lat.values[std::size_t(i) * lat.dims[1] + j];
        }
        out << '\n';
    }
    atomic_write_bytes(path, out.str());
}

}  // namespace

void write_lattice(const std::filesystem::path& path, const Lattice& lat) {
    if (is_csv(path)) {
        write_lattice_csv(path, lat);
        return;
    }
    json header = {{"dims", lat.dims}, {"dtype", "f64"}};
    std::string bytes = header.dump();
    bytes += '\n';
    std::size_t off = bytes.size();
    bytes.resize(off + lat.values.size() * sizeof(double));
    std::memcpy(bytes.data() + off, lat.values.data(), lat.values.size() * sizeof(double));
    byteswap_if_needed(reinterpret_cast<std::uint64_t*>(bytes.data() + off), lat.values.size());
    atomic_write_bytes(path, bytes);
}

Lattice read_lattice(const std::filesystem::path& path) {
    if (is_csv(path)) return read_lattice_csv(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_spec_error("cannot open: " + path.string());
    json header = read_header(in, path);
    if (header.value("dtype", "") != "f64")
        throw invalid_spec_error("expected dtype f64: " + path.string());
    Lattice lat(dims_from_header(header, path));
    in.read(reinterpret_cast<char*>(lat.values.data()),
            static_cast<std::streamsize>(lat.values.size() * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != lat.values.size() * sizeof(double))
        throw invalid_spec_error("truncated lattice payload: " + path.string());
    byteswap_if_needed(reinterpret_cast<std::uint64_t*>(lat.values.data()), lat.values.size());
    return lat;
}

void write_mask(const std::filesystem::path& path, const Mask& mask) {
    json header = {{"dims", mask.dims}, {"dtype", "u8"}};
    std::string bytes = header.dump();
    bytes += '\n';
    bytes.append(reinterpret_cast<const char*>(mask.values.data()), mask.values.size());
    atomic_write_bytes(path, bytes);
}

Mask read_mask(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_spec_error("cannot open: " + path.string());
    json header = read_header(in, path);
    if (header.value("dtype", "") != "u8")
        throw invalid_spec_error("expected dtype u8: " + path.string());
    Mask mask(dims_from_header(header, path));
    in.read(reinterpret_cast<char*>(mask.values.data()),
            static_cast<std::streamsize>(mask.values.size()));
    if (static_cast<std::size_t>(in.gcount()) != mask.values.size())
        throw invalid_spec_error("truncated mask payload: " + path.string());
    for (auto& v : mask.values) v = (v != 0);
    return mask;
}

void write_mask_pgm(const std::filesystem::path& path, const Mask& mask) {
    if (mask.dims.size() != 2) throw invalid_spec_error("PGM export supports 2D masks only");
    std::string bytes =
        "P5\n" + std::to_string(mask.dims[1]) + " " + std::to_string(mask.dims[0]) + "\n255\n";
    for (auto v : mask.values) bytes.push_back(v ? static_cast<char>(255) : 0);
    atomic_write_bytes(path, bytes);
}

void write_mask_csv(const std::filesystem::path& path, const Mask& mask) {
    if (mask.dims.size() != 2) throw invalid_spec_error("CSV export supports 2D masks only");
    std::ostringstream out;
    for (int i = 0; i < mask.dims[0]; ++i) {
        for (int j = 0; j < mask.dims[1]; ++j) {
            if (j) out << ',';
            out << int(mask.values[std::size_t(i) * mask.dims[1] + j]);
        }
        out << '\n';
    }
    atomic_write_bytes(path, out.str());
}

nlohmann::json null_cdf_to_json(const NullCdf& g) {
    json j;
    switch (g.kind) {
        case NullCdf::Kind::beta_analytic:
            j["variant"] = "betaAnalytic";
            j["k"] = g.k;
            break;
        case NullCdf::Kind::normal_approx:
            j["variant"] = "normalApprox";
            j["k"] = g.k;
            break;
        case NullCdf::Kind::empirical:
            j["variant"] = "empirical";
            j["knots"] = g.knots;
            j["values"] = g.values;
            break;
        case NullCdf::Kind::composite:
            j["variant"] = "composite";
            j["component_j"] = g.component_j;
            j["weights"] = g.weights;
            j["components"] = json::array();
            for (const auto& c : g.components) j["components"].push_back(null_cdf_to_json(c));
            break;
    }
    if (g.method1_fallback) j["method1_fallback"] = true;
    return j;
}

NullCdf null_cdf_from_json(const nlohmann::json& j) {
    const std::string variant = j.at("variant").get<std::string>();
    NullCdf g;
    if (variant == "betaAnalytic") {
        g = NullCdf::beta_analytic(j.at("k").get<int>());
    } else if (variant == "normalApprox") {
        g = NullCdf::normal_approx(j.at("k").get<int>());
    } else if (variant == "empirical") {
        g = NullCdf::empirical_steps(j.at("knots").get<std::vector<double>>(),
                                     j.at("values").get<std::vector<double>>());
    } else if (variant == "composite") {
        std::vector<NullCdf> comps;
        for (const auto& c : j.at("components")) comps.push_back(null_cdf_from_json(c));
        g = NullCdf::mixture(j.at("component_j").get<std::vector<int>>(),
                             j.at("weights").get<std::vector<double>>(), std::move(comps));
    } else {
        throw invalid_spec_error("unknown NullCdf variant: " + variant);
    }
    g.method1_fallback = j.value("method1_fallback", false);
    return g;
}

void write_curve_csv(const std::filesystem::path& path, const FdrCurve& curve) {
    std::ostringstream out;
    out.precision(17);
    out << "t,estimate\n";
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i)
        out << curve.thresholds[i] << ',' << curve.estimates[i] << '\n';
    atomic_write_bytes(path, out.str());
}

nlohmann::json curve_summary_json(const FdrCurve& curve) {
    return json{{"alpha", curve.alpha},
                {"lambda", curve.lambda},
                {"t_alpha", curve.t_alpha},
                {"rejections", curve.rejections}};
}

nlohmann::json metrics_to_json(const MetricsReport& m) {
    json j{{"U", m.u}, {"V", m.v}, {"T", m.t}, {"S", m.s},
           {"W", m.w}, {"R", m.r}, {"n0", m.n0}, {"n1", m.n1},
           {"fdp", m.fdp}};
    j["sensitivity"] = m.sensitivity ? json(*m.sensitivity) : json(nullptr);
    j["specificity"] = m.specificity ? json(*m.specificity) : json(nullptr);
    return j;
}

nlohmann::json lip_report_to_json(const LipReport& rep) {
    return json{{"alpha_inf_fdr", rep.alpha_inf_fdr},
                {"alpha_inf_fdrl", rep.alpha_inf_fdrl},
                {"endurance_fdr", rep.endurance_fdr},
                {"endurance_fdrl", rep.endurance_fdrl},
                {"lambda", rep.lambda},
                {"pi0", rep.pi0},
                {"k", rep.k},
                {"analytic", rep.analytic},
                {"fdr_levels", {rep.fdr_levels[0], rep.fdr_levels[1]}},
                {"fdrl_levels", {rep.fdrl_levels[0], rep.fdrl_levels[1]}}};
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    atomic_write_bytes(path, content);
}

}  // namespace fdrl
