#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "enclosure/config.hpp"
#include "enclosure/io.hpp"

namespace enclosure {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw ValidationError("cannot write " + path);
    return out;
}

json grid_header(const Grid& g, const OutputMeta& meta) {
    json h;
    h["dim"] = g.dim();
    h["counts"] = {g.counts()[0], g.counts()[1], g.counts()[2]};
    h["origin"] = {g.origin()[0], g.origin()[1], g.origin()[2]};
    h["spacing"] = {g.spacing()[0], g.spacing()[1], g.spacing()[2]};
    h["order"] = "x fastest";
    h["config_hash"] = meta.config_hash;
    h["dim_mode"] = dim_mode(meta.dim);
    return h;
}

void write_header(const std::string& path, const json& h) { open_out(path) << h.dump(2) << "\n"; }

void csv_preamble(std::ofstream& out, const OutputMeta& meta) {
    out << "# config_hash=" << meta.config_hash << " dim_mode=" << dim_mode(meta.dim) << "\n";
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_field(const std::string& stem, const Grid& grid, const CVector& values, const OutputMeta& meta) {
    auto out = open_out(stem + ".bin", true);
    out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(cplx)));
    json h = grid_header(grid, meta);
    h["dtype"] = "complex128";
    write_header(stem + ".json", h);
}

void write_grid(const std::string& stem, const Grid& grid, const OutputMeta& meta) {
    std::vector<std::uint8_t> kind(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) kind[n] = static_cast<std::uint8_t>(grid.kind(n));
    auto out = open_out(stem + ".bin", true);
    out.write(reinterpret_cast<const char*>(kind.data()), static_cast<std::streamsize>(kind.size()));
    json h = grid_header(grid, meta);
    h["dtype"] = "uint8";
    h["values"] = "0 exterior, 1 interior, 2 boundary";
    write_header(stem + ".json", h);
}

void write_mask(const std::string& stem, const Grid& grid, const EnclosureMask& mask, const OutputMeta& meta) {
    auto out = open_out(stem + ".bin", true);
    out.write(reinterpret_cast<const char*>(mask.inside.data()), static_cast<std::streamsize>(mask.inside.size()));
    json h = grid_header(grid, meta);
    h["dtype"] = "uint8";
    json prov = json::array();
    for (const auto& c : mask.provenance)
        prov.push_back({{"x0", {c.x0[0], c.x0[1], c.x0[2]}}, {"h_D_hat", c.h_D_hat}});
    h["provenance"] = prov;
    write_header(stem + ".json", h);
}

void write_dtn_csv(const std::string& path, const Grid& grid, const DtNTrace& dtn, const OutputMeta& meta) {
    auto out = open_out(path);
    csv_preamble(out, meta);
    out << "node,x,y,z,nu_x,nu_y,nu_z,weight,re_du_dnu,im_du_dnu,re_dlap_dnu,im_dlap_dnu\n";
    for (std::size_t b = 0; b < grid.boundary_count(); ++b) {
        const std::size_t n = grid.boundary_nodes()[b];
        const Vec3 x = grid.point(n), nu = grid.normal(b);
        out << n;
        for (double v : {x[0], x[1], x[2], nu[0], nu[1], nu[2], grid.surface_weight(b), dtn.du_dnu[b].real(),
                         dtn.du_dnu[b].imag(), dtn.dlap_dnu[b].real(), dtn.dlap_dnu[b].imag()})
            out << ',' << format_double(v);
        out << '\n';
    }
}

std::string indicator_header(int dim) {
    std::string h;
    for (int a = 1; a <= dim; ++a) h += "x0_" + std::to_string(a) + ",";
    for (int a = 1; a <= dim; ++a) h += "w_" + std::to_string(a) + ",";
    return h + "h,t,re_I,im_I,re_I_oracle,im_I_oracle,solver_iters,residual";
}

std::string indicator_row(const IndicatorSample& s, int dim) {
    std::string r;
    for (int a = 0; a < dim; ++a) r += format_double(s.x0[a]) + ",";
    for (int a = 0; a < dim; ++a) r += format_double(s.w[a]) + ",";
    for (double v : {s.h, s.t, s.value.real(), s.value.imag(), s.value_volume_oracle.real(),
                     s.value_volume_oracle.imag()})
        r += format_double(v) + ",";
    r += std::to_string(s.iterations) + "," + format_double(s.residual);
    return r;
}

void write_indicator_csv(const std::string& path, const IndicatorTable& table, const OutputMeta& meta) {
    auto out = open_out(path);
    csv_preamble(out, meta);
    out << indicator_header(table.dim) << '\n';
    for (const auto& s : table.samples) out << indicator_row(s, table.dim) << '\n';
}

void write_support_csv(const std::string& path, const std::vector<SupportEstimate>& estimates, int dim,
                       const OutputMeta& meta) {
    auto out = open_out(path);
    csv_preamble(out, meta);
    for (int a = 1; a <= dim; ++a) out << "x0_" << a << ',';
    for (int a = 1; a <= dim; ++a) out << "w_" << a << ',';
    out << "t,h_D_hat,slope,residual,used,usable,monotone,h_D_true\n";
    for (const auto& e : estimates) {
        for (int a = 0; a < dim; ++a) out << format_double(e.x0[a]) << ',';
        for (int a = 0; a < dim; ++a) out << format_double(e.w[a]) << ',';
        out << format_double(e.t) << ',' << format_double(e.h_D_hat) << ',' << format_double(e.slope) << ','
            << format_double(e.residual) << ',' << e.used << ',' << (e.usable ? 1 : 0) << ',' << (e.monotone ? 1 : 0)
            << ',' << format_double(e.truth) << '\n';
    }
}

} // namespace enclosure
