#include "pu/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace pu {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

PULabel parse_label(const std::string& token, std::size_t line_no) {
    // 0/1 files interoperate with the naive baseline's class encoding.
    if (token == "P" || token == "1") return PULabel::Positive;
    if (token == "U" || token == "0") return PULabel::Unlabelled;
    throw Error(ErrorCode::UnknownLabelToken,
                "line " + std::to_string(line_no) + ": label token '" + token + "'");
}

void check_unique_id(std::unordered_set<std::string>& seen, const std::string& id,
                     std::size_t line_no) {
    if (!seen.insert(id).second)
        throw Error(ErrorCode::DuplicateId,
                    "line " + std::to_string(line_no) + ": entity id '" + id + "'");
}

PUDataset load_dense(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::EmptyDataset, "missing header line");
    std::vector<std::string> header = split(strip(line), ',');
    if (header.size() < 2 || strip(header[0]) != "id" || strip(header[1]) != "label")
        throw Error(ErrorCode::MalformedRow, "header must start with id,label");

    PUDataset ds;
    for (std::size_t i = 2; i < header.size(); ++i) ds.feature_names.push_back(strip(header[i]));
    std::size_t n_cols = ds.feature_names.size();
    ds.features.n_cols = n_cols;

    std::unordered_set<std::string> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = strip(line);
        if (stripped.empty()) continue;
        std::vector<std::string> cells = split(stripped, ',');
        if (cells.size() != n_cols + 2)
            throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected " +
                                                     std::to_string(n_cols + 2) + " columns, got " +
                                                     std::to_string(cells.size()));
        std::string id = strip(cells[0]);
        check_unique_id(seen, id, line_no);
        ds.ids.push_back(id);
        ds.labels.push_back(parse_label(strip(cells[1]), line_no));

        std::vector<std::uint32_t> active;
        for (std::size_t c = 0; c < n_cols; ++c) {
            std::string cell = strip(cells[c + 2]);
            if (cell == "1")
                active.push_back(static_cast<std::uint32_t>(c));
            else if (cell != "0")
                throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) +
                                                         ": non-binary feature value '" + cell +
                                                         "'");
        }
        ds.features.rows.push_back(std::move(active));
    }
    ds.features.n_rows = ds.features.rows.size();
    if (ds.features.n_rows == 0) throw Error(ErrorCode::EmptyDataset, "no entity rows");
    return ds;
}

PUDataset load_sparse(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::EmptyDataset, "missing #sparse header line");
    std::string header = strip(line);
    const std::string prefix = "#sparse n_cols=";
    if (header.rfind(prefix, 0) != 0)
        throw Error(ErrorCode::MalformedRow, "expected '#sparse n_cols=<N>' header");
    std::size_t n_cols = 0;
    {
        std::string num = header.substr(prefix.size());
        auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), n_cols);
        if (ec != std::errc() || p != num.data() + num.size())
            throw Error(ErrorCode::MalformedRow, "bad n_cols value '" + num + "'");
    }

    PUDataset ds;
    ds.features.n_cols = n_cols;
    for (std::size_t c = 0; c < n_cols; ++c) ds.feature_names.push_back("f" + std::to_string(c));

    std::unordered_set<std::string> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = strip(line);
        if (stripped.empty()) continue;
        std::vector<std::string> cells = split(stripped, ',');
        if (cells.size() != 3)
            throw Error(ErrorCode::MalformedRow,
                        "line " + std::to_string(line_no) + ": expected id,label,indices");
        std::string id = strip(cells[0]);
        check_unique_id(seen, id, line_no);
        ds.ids.push_back(id);
        ds.labels.push_back(parse_label(strip(cells[1]), line_no));

        std::vector<std::uint32_t> active;
        std::string idx_field = strip(cells[2]);
        if (!idx_field.empty()) {
            for (const std::string& tok : split(idx_field, ';')) {
                std::string t = strip(tok);
                std::uint32_t idx = 0;
                auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), idx);
                if (ec != std::errc() || p != t.data() + t.size())
                    throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) +
                                                             ": bad feature index '" + t + "'");
                if (idx >= n_cols)
                    throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) +
                                                             ": feature index " +
                                                             std::to_string(idx) + " out of range");
                if (!active.empty() && idx <= active.back())
                    throw Error(ErrorCode::MalformedRow,
                                "line " + std::to_string(line_no) +
                                    ": indices must be strictly increasing");
                active.push_back(idx);
            }
        }
        ds.features.rows.push_back(std::move(active));
    }
    ds.features.n_rows = ds.features.rows.size();
    if (ds.features.n_rows == 0) throw Error(ErrorCode::EmptyDataset, "no entity rows");
    return ds;
}

} // namespace

std::size_t SparseBinaryMatrix::active_count() const {
    std::size_t total = 0;
    for (const auto& row : rows) total += row.size();
    return total;
}

bool SparseBinaryMatrix::get(std::size_t r, std::uint32_t c) const {
    const auto& row = rows[r];
    return std::binary_search(row.begin(), row.end(), c);
}

SparseBinaryMatrix SparseBinaryMatrix::submatrix(std::span<const std::uint32_t> row_indices) const {
    SparseBinaryMatrix out;
    out.n_cols = n_cols;
    out.n_rows = row_indices.size();
    out.rows.reserve(row_indices.size());
    for (std::uint32_t r : row_indices) out.rows.push_back(rows[r]);
    return out;
}

std::size_t PUDataset::n_positives() const {
    return static_cast<std::size_t>(
        std::count(labels.begin(), labels.end(), PULabel::Positive));
}

PUDataset PUDataset::subset(std::span<const std::uint32_t> row_indices) const {
    PUDataset out;
    out.feature_names = feature_names;
    out.features = features.submatrix(row_indices);
    out.ids.reserve(row_indices.size());
    out.labels.reserve(row_indices.size());
    for (std::uint32_t r : row_indices) {
        out.ids.push_back(ids[r]);
        out.labels.push_back(labels[r]);
    }
    return out;
}

PUDataset load_dataset(const std::string& path, FileFormat format) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    return format == FileFormat::DenseCsv ? load_dense(in) : load_sparse(in);
}

void write_dataset(const PUDataset& ds, const std::string& path, FileFormat format) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    std::size_t n_cols = ds.features.n_cols;
    if (format == FileFormat::DenseCsv) {
        out << "id,label";
        for (const auto& name : ds.feature_names) out << ',' << name;
        out << '\n';
        for (std::size_t r = 0; r < ds.n_entities(); ++r) {
            out << ds.ids[r] << ',' << (ds.labels[r] == PULabel::Positive ? 'P' : 'U');
            const auto& row = ds.features.rows[r];
            std::size_t next = 0;
            for (std::size_t c = 0; c < n_cols; ++c) {
                bool on = next < row.size() && row[next] == c;
                if (on) ++next;
                out << ',' << (on ? '1' : '0');
            }
            out << '\n';
        }
    } else {
        out << "#sparse n_cols=" << n_cols << '\n';
        for (std::size_t r = 0; r < ds.n_entities(); ++r) {
            out << ds.ids[r] << ',' << (ds.labels[r] == PULabel::Positive ? 'P' : 'U') << ',';
            const auto& row = ds.features.rows[r];
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ';';
                out << row[i];
            }
            out << '\n';
        }
    }
}

FileFormat detect_format(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::string line;
    std::getline(in, line);
    return line.rfind("#sparse", 0) == 0 ? FileFormat::SparseList : FileFormat::DenseCsv;
}

DatasetStats compute_stats(const PUDataset& ds) {
    DatasetStats stats;
    stats.n_features = ds.features.n_cols;
    stats.n_entities = ds.n_entities();
    stats.n_positives = ds.n_positives();
    std::size_t total = stats.n_features * stats.n_entities;
    stats.sparsity_percent =
        total == 0 ? 100.0
                   : 100.0 * (1.0 - static_cast<double>(ds.features.active_count()) /
                                        static_cast<double>(total));
    return stats;
}

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> partition_pu(const PUDataset& ds) {
    std::vector<std::uint32_t> p, u;
    for (std::size_t r = 0; r < ds.n_entities(); ++r) {
        if (ds.labels[r] == PULabel::Positive)
            p.push_back(static_cast<std::uint32_t>(r));
        else
            u.push_back(static_cast<std::uint32_t>(r));
    }
    return {std::move(p), std::move(u)};
}

} // namespace pu
