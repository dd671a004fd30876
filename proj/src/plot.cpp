#include "radchem/plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace radchem
{

std::vector<double> const& Table::column(std::string const& name) const
{
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
    {
        throw PlotError(fmt::format("no column named '{}'", name));
    }
    return columns[static_cast<std::size_t>(it - header.begin())];
}

namespace
{
std::vector<std::string> split(std::string const& line)
{
    std::vector<std::string> cells;
    std::stringstream stream(line);
    std::string cell;
    while (std::getline(stream, cell, ','))
    {
        if (!cell.empty() && cell.back() == '\r')
            cell.pop_back();
        cells.push_back(cell);
    }
    return cells;
}

double parse_cell(std::string const& text)
{
    double value = std::numeric_limits<double>::quiet_NaN();
    auto const* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc{} || ptr != last)
        return std::numeric_limits<double>::quiet_NaN();
    return value;
}

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 80;
constexpr double kRight = 20;
constexpr double kTop = 30;
constexpr double kBottom = 50;
constexpr std::array<char const*, 6> kColors{
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Range
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double x)
    {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    bool empty() const { return !(lo <= hi); }
    void widen()
    {
        if (empty())
        {
            lo = 0.0;
            hi = 1.0;
        }
        else if (lo == hi)
        {
            double const pad = lo == 0.0 ? 0.5 : 0.1 * std::abs(lo);
            lo -= pad;
            hi += pad;
        }
    }
};
}  // namespace

Table read_csv_table(std::istream& in)
{
    Table table;
    std::string line;
    if (!std::getline(in, line))
    {
        return table;
    }
    table.header = split(line);
    table.columns.resize(table.header.size());
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        auto cells = split(line);
        for (std::size_t c = 0; c < table.columns.size(); ++c)
        {
            table.columns[c].push_back(
                c < cells.size() ? parse_cell(cells[c])
                                 : std::numeric_limits<double>::quiet_NaN());
        }
    }
    return table;
}

bool wants_log_axis(Table const& table, std::vector<std::string> const& columns)
{
    Range positive;
    for (auto const& name : columns)
    {
        for (double y : table.column(name))
        {
            if (std::isfinite(y) && y > 0.0)
                positive.add(y);
        }
    }
    return !positive.empty() && positive.hi > 1e3 * positive.lo;
}

void render_svg(std::ostream& os,
                Table const& table,
                std::vector<std::string> const& columns)
{
    for (auto const& name : columns)
    {
        table.column(name);
    }
    bool const log_y = wants_log_axis(table, columns);
    auto transform = [log_y](double y) { return log_y ? std::log10(y) : y; };
    auto usable = [log_y](double y) {
        return std::isfinite(y) && (!log_y || y > 0.0);
    };

    std::vector<double> const empty;
    auto const& xs = table.header.empty() ? empty : table.columns.front();
    Range xr;
    Range yr;
    for (auto const& name : columns)
    {
        auto const& ys = table.column(name);
        for (std::size_t i = 0; i < ys.size(); ++i)
        {
            if (std::isfinite(xs[i]) && usable(ys[i]))
            {
                xr.add(xs[i]);
                yr.add(transform(ys[i]));
            }
        }
    }
    xr.widen();
    yr.widen();

    double const plot_w = kWidth - kLeft - kRight;
    double const plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) {
        return kTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h;
    };

    fmt::print(os,
               "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" "
               "height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
               kWidth, kHeight);
    fmt::print(os, "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
               kWidth, kHeight);
    fmt::print(os,
               "<g stroke=\"black\" stroke-width=\"1\">"
               "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>"
               "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{3}\"/></g>\n",
               kLeft, kTop + plot_h, kLeft + plot_w, kTop);

    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int k = 0; k <= 4; ++k)
    {
        double const fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
        double const fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
        fmt::print(os,
                   "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.4g}</text>\n",
                   px(fx), kTop + plot_h + 18, fx);
        double const label = log_y ? std::pow(10.0, fy) : fy;
        fmt::print(os,
                   "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.4g}</text>\n",
                   kLeft - 6, py(fy) + 4, label);
    }
    std::string const xlabel = table.header.empty() ? "" : table.header.front();
    fmt::print(os,
               "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
               kLeft + plot_w / 2, kHeight - 10, xlabel);
    if (log_y)
    {
        fmt::print(os, "<text x=\"{}\" y=\"{}\">log scale</text>\n", kLeft + 4,
                   kTop - 10);
    }
    os << "</g>\n";

    for (std::size_t c = 0; c < columns.size(); ++c)
    {
        auto const& ys = table.column(columns[c]);
        char const* color = kColors[c % kColors.size()];
        std::string points;
        for (std::size_t i = 0; i < ys.size(); ++i)
        {
            if (!std::isfinite(xs[i]) || !usable(ys[i]))
                continue;
            if (!points.empty())
                points += ' ';
            points += fmt::format("{:.2f},{:.2f}", px(xs[i]), py(transform(ys[i])));
        }
        if (!points.empty())
        {
            fmt::print(os,
                       "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" "
                       "points=\"{}\"/>\n",
                       color, points);
        }
        fmt::print(os,
                   "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" "
                   "font-size=\"11\" fill=\"{}\">{}</text>\n",
                   kLeft + plot_w - 120, kTop + 14 + 14.0 * c, color, columns[c]);
    }
    os << "</svg>\n";
}

}  // namespace radchem
