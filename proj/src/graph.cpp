#include <smds/graph.hpp>

#include <smds/error.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace smds {

namespace {

std::uint64_t edge_key(Vertex u, Vertex v) {
    if (u > v) std::swap(u, v);
    return (std::uint64_t{u} << 32) | v;
}

// Splits text into lines, keeping 1-based line numbers and dropping '\r'.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string_view& line) {
        if (pos_ > text_.size()) return false;
        auto end = text_.find('\n', pos_);
        if (end == std::string_view::npos) end = text_.size();
        line = text_.substr(pos_, end - pos_);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos_ = end + 1;
        ++line_no_;
        return true;
    }

    [[nodiscard]] std::size_t line_no() const noexcept { return line_no_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <class T>
bool parse_number(std::string_view token, T& out) {
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

Graph graph_from_points(const std::vector<std::array<double, 3>>& pts) {
    double shortest = std::numeric_limits<double>::infinity();
    auto dist = [&](std::size_t a, std::size_t b) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += (pts[a][k] - pts[b][k]) * (pts[a][k] - pts[b][k]);
        return std::sqrt(s);
    };
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) shortest = std::min(shortest, dist(a, b));

    Graph g(pts.size());
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
            if (dist(a, b) < shortest * (1 + 1e-9))
                g.add_edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
    return g;
}

// All cyclic permutations of (x, y, z) with every sign combination of the
// nonzero entries.
void add_cyclic(std::vector<std::array<double, 3>>& pts, double x, double y, double z) {
    for (int rot = 0; rot < 3; ++rot) {
        std::array<double, 3> base{x, y, z};
        std::rotate(base.begin(), base.begin() + rot, base.end());
        for (int signs = 0; signs < 8; ++signs) {
            std::array<double, 3> p = base;
            bool skip = false;
            for (int k = 0; k < 3; ++k) {
                if (signs & (1 << k)) {
                    if (p[k] == 0.0) skip = true;
                    p[k] = -p[k];
                }
            }
            if (!skip) pts.push_back(p);
        }
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Graph
// ---------------------------------------------------------------------------

Graph::Graph(std::size_t n) : adjacency_(n) {}

bool Graph::add_edge(Vertex u, Vertex v) {
    if (u >= num_vertices() || v >= num_vertices())
        throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
    if (u == v) return false;
    if (!edge_keys_.insert(edge_key(u, v)).second) return false;
    if (u > v) std::swap(u, v);
    edges_.push_back({u, v});
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
    return true;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    return edge_keys_.contains(edge_key(u, v));
}

void Graph::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != num_vertices())
        throw InputError("label count does not match vertex count");
    labels_ = std::move(labels);
}

std::string Graph::label(Vertex v) const {
    return labels_.empty() ? std::to_string(v) : labels_.at(v);
}

// ---------------------------------------------------------------------------
// DistanceMatrix
// ---------------------------------------------------------------------------

DistanceMatrix::DistanceMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
    data_[i * n_ + j] = value;
    data_[j * n_ + i] = value;
}

double DistanceMatrix::max_value() const noexcept {
    double m = 0.0;
    for (double d : data_) m = std::max(m, d);
    return m;
}

DistanceMatrix DistanceMatrix::scaled(double factor) const {
    DistanceMatrix out = *this;
    for (double& d : out.data_) d *= factor;
    out.dilation_ *= factor;
    return out;
}

void DistanceMatrix::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != n_)
        throw InputError("label count does not match matrix size");
    labels_ = std::move(labels);
}

void DistanceMatrix::validate() const {
    auto name = [&](std::size_t i) { return labels_.empty() ? std::to_string(i) : labels_[i]; };
    for (std::size_t i = 0; i < n_; ++i) {
        if ((*this)(i, i) != 0.0) throw InputError("nonzero diagonal entry at " + name(i));
        for (std::size_t j = i + 1; j < n_; ++j) {
            double a = (*this)(i, j), b = (*this)(j, i);
            if (!std::isfinite(a) || !std::isfinite(b) || a < 0 || b < 0)
                throw InputError("invalid distance between " + name(i) + " and " + name(j));
            if (a != b) throw InputError("asymmetric distance between " + name(i) + " and " + name(j));
        }
    }
}

// ---------------------------------------------------------------------------
// Matrix Market
// ---------------------------------------------------------------------------

Graph parse_matrix_market(std::string_view text) {
    LineReader reader(text);
    std::string_view line;
    bool have_size = false;
    std::size_t rows = 0, cols = 0, expected = 0, seen = 0;
    Graph g;

    while (reader.next(line)) {
        const std::size_t ln = reader.line_no();
        if (line.starts_with("%%")) {
            if (ln != 1) continue;
            auto tok = split_ws(line);
            if (tok.size() < 3 || lower(tok[0]) != "%%matrixmarket" || lower(tok[1]) != "matrix")
                throw ParseError(ln, "malformed Matrix Market banner");
            if (lower(tok[2]) != "coordinate")
                throw ParseError(ln, "unsupported format '" + std::string(tok[2]) + "', expected coordinate");
            continue;
        }
        if (line.starts_with('%')) continue;
        auto tok = split_ws(line);
        if (tok.empty()) continue;

        if (!have_size) {
            if (tok.size() != 3 || !parse_number(tok[0], rows) || !parse_number(tok[1], cols) ||
                !parse_number(tok[2], expected))
                throw ParseError(ln, "malformed size line, expected 'rows cols entries'");
            if (rows != cols)
                throw ParseError(ln, "matrix is " + std::to_string(rows) + "x" + std::to_string(cols) +
                                         ", adjacency must be square");
            g = Graph(rows);
            have_size = true;
            continue;
        }

        std::size_t i = 0, j = 0;
        if (tok.size() < 2 || !parse_number(tok[0], i) || !parse_number(tok[1], j))
            throw ParseError(ln, "malformed entry, expected 'row col [value]'");
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw ParseError(ln, "index (" + std::to_string(i) + ", " + std::to_string(j) +
                                     ") outside declared bounds");
        if (++seen > expected)
            throw ParseError(ln, "more entries than the declared " + std::to_string(expected));
        g.add_edge(static_cast<Vertex>(i - 1), static_cast<Vertex>(j - 1));
    }
    if (!have_size) throw ParseError(reader.line_no(), "missing size line");
    if (seen != expected)
        throw ParseError(reader.line_no(), "expected " + std::to_string(expected) + " entries, found " +
                                               std::to_string(seen));
    return g;
}

// ---------------------------------------------------------------------------
// Edge lists
// ---------------------------------------------------------------------------

Graph parse_edge_list(std::string_view text) {
    LineReader reader(text);
    std::string_view line;
    std::unordered_map<long long, Vertex> index;
    std::vector<std::string> labels;
    std::vector<std::pair<Vertex, Vertex>> pairs;

    auto intern = [&](long long id) {
        auto [it, inserted] = index.try_emplace(id, static_cast<Vertex>(labels.size()));
        if (inserted) labels.push_back(std::to_string(id));
        return it->second;
    };

    while (reader.next(line)) {
        auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto tok = split_ws(body);
        if (tok.size() != 2)
            throw ParseError(reader.line_no(), "expected two vertex ids, got " + std::to_string(tok.size()) + " tokens");
        long long u = 0, v = 0;
        for (auto [t, out] : {std::pair{tok[0], &u}, std::pair{tok[1], &v}})
            if (!parse_number(t, *out))
                throw ParseError(reader.line_no(), "'" + std::string(t) + "' is not an integer vertex id");
        Vertex a = intern(u);
        Vertex b = intern(v);
        pairs.emplace_back(a, b);
    }

    Graph g(labels.size());
    for (auto [a, b] : pairs) g.add_edge(a, b);
    g.set_labels(std::move(labels));
    return g;
}

std::string to_edge_list(const Graph& g) {
    std::ostringstream out;
    out << "# " << g.num_vertices() << " vertices, " << g.num_edges() << " edges\n";
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

Graph generate_polytope(Polytope kind) {
    constexpr double phi = std::numbers::phi;
    std::vector<std::array<double, 3>> pts;
    switch (kind) {
    case Polytope::tetrahedron:
        pts = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
        break;
    case Polytope::cube:
        for (int b = 0; b < 8; ++b)
            pts.push_back({(b & 1) ? 1.0 : -1.0, (b & 2) ? 1.0 : -1.0, (b & 4) ? 1.0 : -1.0});
        break;
    case Polytope::octahedron:
        pts = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
        break;
    case Polytope::dodecahedron:
        for (int b = 0; b < 8; ++b)
            pts.push_back({(b & 1) ? 1.0 : -1.0, (b & 2) ? 1.0 : -1.0, (b & 4) ? 1.0 : -1.0});
        add_cyclic(pts, 0.0, 1.0 / phi, phi);
        break;
    case Polytope::icosahedron:
        add_cyclic(pts, 0.0, 1.0, phi);
        break;
    }
    return graph_from_points(pts);
}

Graph generate_cycle(std::size_t n) {
    Graph g(n);
    for (std::size_t i = 0; i < n && n > 1; ++i)
        g.add_edge(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n));
    return g;
}

Graph generate_path(std::size_t n) {
    Graph g(n);
    for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
    return g;
}

Graph generate_grid(std::size_t rows, std::size_t cols) {
    Graph g(rows * cols);
    auto at = [cols](std::size_t r, std::size_t c) { return static_cast<Vertex>(r * cols + c); };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) g.add_edge(at(r, c), at(r, c + 1));
            if (r + 1 < rows) g.add_edge(at(r, c), at(r + 1, c));
        }
    }
    return g;
}

Graph subdivide(const Graph& g, unsigned times) {
    if (times == 0) throw InputError("subdivision count must be at least 1");
    Graph current = g;
    for (unsigned round = 0; round < times; ++round) {
        Graph next(current.num_vertices() + current.num_edges());
        Vertex mid = static_cast<Vertex>(current.num_vertices());
        for (const Edge& e : current.edges()) {
            next.add_edge(e.u, mid);
            next.add_edge(mid, e.v);
            ++mid;
        }
        if (!current.labels().empty()) {
            auto labels = current.labels();
            for (const Edge& e : current.edges())
                labels.push_back(current.label(e.u) + "-" + current.label(e.v));
            next.set_labels(std::move(labels));
        }
        current = std::move(next);
    }
    return current;
}

// ---------------------------------------------------------------------------
// APSP
// ---------------------------------------------------------------------------

DistanceMatrix apsp(const Graph& g) {
    const std::size_t n = g.num_vertices();
    DistanceMatrix dm(n);
    constexpr auto unreached = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> hops(n);
    std::vector<Vertex> frontier;
    frontier.reserve(n);

    for (std::size_t s = 0; s < n; ++s) {
        std::fill(hops.begin(), hops.end(), unreached);
        frontier.clear();
        hops[s] = 0;
        frontier.push_back(static_cast<Vertex>(s));
        for (std::size_t head = 0; head < frontier.size(); ++head) {
            Vertex v = frontier[head];
            for (Vertex w : g.neighbors(v)) {
                if (hops[w] == unreached) {
                    hops[w] = hops[v] + 1;
                    frontier.push_back(w);
                }
            }
        }
        if (frontier.size() != n) {
            auto missing = std::find(hops.begin(), hops.end(), unreached) - hops.begin();
            throw InputError("graph is disconnected: vertices " + g.label(static_cast<Vertex>(s)) + " and " +
                             g.label(static_cast<Vertex>(missing)) + " lie in different components");
        }
        for (std::size_t t = s + 1; t < n; ++t) dm.set(s, t, static_cast<double>(hops[t]));
    }
    if (!g.labels().empty()) dm.set_labels(g.labels());
    return dm;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string to_csv(const DistanceMatrix& dm) {
    auto name = [&](std::size_t i) { return dm.labels().empty() ? std::to_string(i) : dm.labels()[i]; };
    std::ostringstream out;
    out.precision(17);
    for (std::size_t j = 0; j < dm.size(); ++j) out << ',' << name(j);
    out << '\n';
    for (std::size_t i = 0; i < dm.size(); ++i) {
        out << name(i);
        for (std::size_t j = 0; j < dm.size(); ++j) out << ',' << dm(i, j);
        out << '\n';
    }
    return out.str();
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace

DistanceMatrix parse_distance_csv(std::string_view text) {
    LineReader reader(text);
    std::string_view line;
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;
    while (reader.next(line))
        if (!trim(line).empty()) rows.emplace_back(reader.line_no(), split_csv(line));
    if (rows.empty()) throw ParseError(0, "empty distance matrix");

    auto numeric = [](std::string_view s) {
        double v;
        return parse_number(s, v);
    };

    std::vector<std::string> labels;
    std::size_t first_data = 0;
    const auto& head = rows.front().second;
    if (!std::all_of(head.begin(), head.end(), numeric)) {
        auto begin = head.begin();
        if (!head.empty() && head.front().empty()) ++begin;
        for (auto it = begin; it != head.end(); ++it) labels.emplace_back(*it);
        first_data = 1;
    }
    const std::size_t n = labels.empty() ? head.size() : labels.size();
    const bool row_labels_from_header = labels.empty();

    if (rows.size() - first_data != n)
        throw InputError("incomplete matrix: expected " + std::to_string(n) + " rows, found " +
                         std::to_string(rows.size() - first_data));

    std::vector<double> values(n * n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t r = 0; r < n; ++r) {
        const auto& [ln, fields] = rows[first_data + r];
        std::size_t offset = 0;
        if (fields.size() == n + 1) {
            offset = 1;
            if (row_labels_from_header) labels.emplace_back(fields.front());
        } else if (fields.size() != n) {
            throw ParseError(ln, "expected " + std::to_string(n) + " values, found " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < n; ++c) {
            auto field = fields[offset + c];
            if (field.empty()) continue; // reported as incomplete below
            double v;
            if (!parse_number(field, v)) throw ParseError(ln, "'" + std::string(field) + "' is not a number");
            values[r * n + c] = v;
        }
    }
    if (!labels.empty() && labels.size() != n) labels.clear();
    auto name = [&](std::size_t i) { return labels.empty() ? std::to_string(i) : labels[i]; };

    DistanceMatrix dm(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double a = values[i * n + j], b = values[j * n + i];
            if (!std::isfinite(a) || !std::isfinite(b))
                throw InputError("incomplete matrix: missing distance between " + name(i) + " and " + name(j));
            if (i == j) {
                if (a != 0.0) throw InputError("nonzero diagonal entry at " + name(i));
                continue;
            }
            if (a < 0) throw InputError("negative distance between " + name(i) + " and " + name(j));
            if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}))
                throw InputError("asymmetric matrix: (" + name(i) + ", " + name(j) + ") differs from (" + name(j) +
                                 ", " + name(i) + ")");
            dm.set(i, j, 0.5 * (a + b));
        }
    }
    if (!labels.empty()) dm.set_labels(std::move(labels));
    return dm;
}

} // namespace smds
