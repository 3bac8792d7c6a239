/**
 * @file reports.cpp
 * @brief Payload emitters and the hashed, overwrite-guarded report bundle.
 */

#include "nlstokes/cli/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"
#include "nlstokes/common.hpp"

namespace nls {

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, data.data(), data.size());
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

OutputDir::OutputDir(std::string path, bool force) : dir_(std::move(path)) {
    namespace fs = std::filesystem;
    const fs::path p(dir_);
    std::error_code ec;
    if (fs::exists(p / "manifest.json", ec) && !force)
        throw ConfigError("output directory \"" + dir_ +
                          "\" already holds a report bundle; pass --force to overwrite");
    fs::create_directories(p, ec);
    if (ec) throw ConfigError("cannot create output directory \"" + dir_ + "\": " + ec.message());
}

void OutputDir::write_text(const std::string& name, const std::string& payload) {
    const std::string full = dir_ + "/" + name;
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw ConfigError("cannot write \"" + full + "\"");
    entries_.push_back(Entry{name, sha256_hex(payload), payload.size()});
}

void OutputDir::write_manifest(const std::string& command) {
    std::vector<Entry> sorted = entries_;
    std::sort(sorted.begin(), sorted.end(),
              [](const Entry& a, const Entry& b) { return a.name < b.name; });

    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["command"] = command;
    j["files"] = nlohmann::ordered_json::array();
    for (const Entry& e : sorted)
        j["files"].push_back({{"name", e.name}, {"sha256", e.sha256}, {"bytes", e.bytes}});

    const std::string full = dir_ + "/manifest.json";
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    out << j.dump(2) << "\n";
    if (!out) throw ConfigError("cannot write \"" + full + "\"");
}

std::string solution_csv(const PointCloud& cloud, const Solution& sol) {
    const int dim = cloud.dim();
    const int n = cloud.size();
    // Triangular solves can leave negative zeros behind; the table prints
    // the canonical one.
    const auto field = [](double v) { return format_g17(v == 0.0 ? 0.0 : v); };
    std::ostringstream os;
    for (int d = 0; d < dim; ++d) os << "x" << d + 1 << ",";
    os << "tag";
    for (int d = 0; d < dim; ++d) os << ",u" << d + 1;
    os << ",p\n";
    for (int i = 0; i < n; ++i) {
        const double* x = cloud.point(i);
        for (int d = 0; d < dim; ++d) os << format_g17(x[d]) << ",";
        os << (cloud.tag(i) == RegionTag::Interior ? "interior" : "layer");
        for (int d = 0; d < dim; ++d)
            os << "," << field(sol.u[static_cast<std::size_t>(i) * dim + d]);
        os << "," << field(sol.p[i]) << "\n";
    }
    return os.str();
}

namespace {

/** Pixel coordinate with stable two-decimal formatting. */
std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(int decade) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "1e%d", decade);
    return buf;
}

}  // namespace

std::string study_svg(const StudyReport& rep) {
    // Canvas and plot frame.
    const double kw = 640.0, kh = 480.0;
    const double left = 70.0, right = 620.0, top = 20.0, bottom = 430.0;

    // Collect log10 data over successful rows with positive finite errors.
    struct Series {
        const char* label;
        const char* color;
        std::vector<double> x, y;
    };
    Series series[3] = {{"u L2", "#1f77b4", {}, {}},
                        {"u energy", "#2ca02c", {}, {}},
                        {"p L2", "#d62728", {}, {}}};
    auto push = [](Series& s, double delta, double err) {
        if (err > 0.0 && std::isfinite(err)) {
            s.x.push_back(std::log10(delta));
            s.y.push_back(std::log10(err));
        }
    };
    for (const StudyRow& row : rep.rows) {
        if (!row.ok || !(row.delta > 0.0)) continue;
        push(series[0], row.delta, row.errors.error_u_l2);
        push(series[1], row.delta, row.errors.error_u_energy);
        push(series[2], row.delta, row.errors.error_p_l2);
    }

    // Guide lines anchored 0.2 decades below the first u-L2 point, spanning
    // the delta range of the data.
    const bool have = !series[0].x.empty();
    const double gx0 = have ? series[0].x.front() : -1.0;
    const double gx1 = have ? series[0].x.back() : -1.0;
    const double gy0 = have ? series[0].y.front() - 0.2 : -1.0;

    // Axis ranges snapped to whole decades so decade ticks always exist.
    double xmin = gx0, xmax = gx0, ymin = gy0, ymax = gy0;
    for (const Series& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            xmin = std::min(xmin, s.x[k]);
            xmax = std::max(xmax, s.x[k]);
            ymin = std::min(ymin, s.y[k]);
            ymax = std::max(ymax, s.y[k]);
        }
    for (double slope : {0.5, 1.0})
        if (have) {
            ymin = std::min(ymin, gy0 + slope * (gx1 - gx0));
            ymax = std::max(ymax, gy0);
        }
    int xlo = static_cast<int>(std::floor(xmin)), xhi = static_cast<int>(std::ceil(xmax));
    int ylo = static_cast<int>(std::floor(ymin)), yhi = static_cast<int>(std::ceil(ymax));
    if (xlo == xhi) --xlo;
    if (ylo == yhi) --ylo;

    auto X = [&](double x) { return left + (x - xlo) / double(xhi - xlo) * (right - left); };
    auto Y = [&](double y) { return bottom - (y - ylo) / double(yhi - ylo) * (bottom - top); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kw << "\" height=\"" << kh
       << "\" viewBox=\"0 0 " << kw << " " << kh << "\">\n"
       << "<rect width=\"" << kw << "\" height=\"" << kh << "\" fill=\"#ffffff\"/>\n";

    // Axes as line elements.
    os << "<line x1=\"" << px(left) << "\" y1=\"" << px(bottom) << "\" x2=\"" << px(right)
       << "\" y2=\"" << px(bottom) << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    os << "<line x1=\"" << px(left) << "\" y1=\"" << px(top) << "\" x2=\"" << px(left)
       << "\" y2=\"" << px(bottom) << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

    // Decade ticks: short line elements plus labels.
    for (int d = xlo; d <= xhi; ++d) {
        const double x = X(d);
        os << "<line x1=\"" << px(x) << "\" y1=\"" << px(bottom) << "\" x2=\"" << px(x)
           << "\" y2=\"" << px(bottom + 6) << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << px(x) << "\" y=\"" << px(bottom + 20)
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
           << tick_label(d) << "</text>\n";
    }
    for (int d = ylo; d <= yhi; ++d) {
        const double y = Y(d);
        os << "<line x1=\"" << px(left - 6) << "\" y1=\"" << px(y) << "\" x2=\"" << px(left)
           << "\" y2=\"" << px(y) << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << px(left - 9) << "\" y=\"" << px(y + 4)
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
           << tick_label(d) << "</text>\n";
    }

    // Axis titles and plot caption.
    os << "<text x=\"" << px((left + right) / 2) << "\" y=\"" << px(kh - 12)
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">delta</text>\n";
    os << "<text x=\"16\" y=\"" << px((top + bottom) / 2)
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\""
       << " transform=\"rotate(-90 16 " << px((top + bottom) / 2) << ")\">error</text>\n";
    os << "<text x=\"" << px(left) << "\" y=\"14\" font-family=\"sans-serif\" font-size=\"12\">"
       << rep.case_name << " on " << rep.domain_name << ", kernel " << rep.kernel_name
       << "</text>\n";

    // Exactly three data polylines, one per error norm.
    for (const Series& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (k) os << " ";
            os << px(X(s.x[k])) << "," << px(Y(s.y[k]));
        }
        os << "\"/>\n";
    }

    // Exactly two dashed guide polylines: slope 1/2 and slope 1.
    const char* dashes[2] = {"6,4", "2,3"};
    const double slopes[2] = {0.5, 1.0};
    for (int g = 0; g < 2; ++g) {
        os << "<polyline fill=\"none\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\""
           << dashes[g] << "\" points=\"";
        if (have) {
            os << px(X(gx0)) << "," << px(Y(gy0)) << " " << px(X(gx1)) << ","
               << px(Y(gy0 + slopes[g] * (gx1 - gx0)));
        }
        os << "\"/>\n";
    }

    // Legend.
    const char* names[5] = {"u L2", "u energy", "p L2", "slope 1/2", "slope 1"};
    const char* colors[5] = {"#1f77b4", "#2ca02c", "#d62728", "#888888", "#888888"};
    for (int k = 0; k < 5; ++k)
        os << "<text x=\"" << px(right - 110) << "\" y=\"" << px(top + 16 + 14 * k)
           << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << colors[k] << "\">"
           << names[k] << "</text>\n";

    os << "</svg>\n";
    return os.str();
}

}  // namespace nls
