#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "pu/dataset.hpp"

namespace testutil {

inline std::string temp_path(const std::string& name) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() / "pu_tests";
    std::filesystem::create_directories(dir);
    return (dir / (std::to_string(counter++) + "_" + name)).string();
}

inline std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = temp_path(name);
    std::ofstream out(path);
    out << content;
    return path;
}

// Random PU dataset on dense binary features; at least one positive and one
// unlabelled row.
inline pu::PUDataset random_dataset(std::mt19937_64& rng, std::size_t n_rows, std::size_t n_cols,
                                    double density = 0.3) {
    pu::PUDataset ds;
    ds.features.n_rows = n_rows;
    ds.features.n_cols = n_cols;
    ds.features.rows.resize(n_rows);
    for (std::size_t c = 0; c < n_cols; ++c) ds.feature_names.push_back("f" + std::to_string(c));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t r = 0; r < n_rows; ++r) {
        ds.ids.push_back("e" + std::to_string(r));
        for (std::size_t c = 0; c < n_cols; ++c)
            if (unit(rng) < density) ds.features.rows[r].push_back(static_cast<std::uint32_t>(c));
        ds.labels.push_back(unit(rng) < 0.3 ? pu::PULabel::Positive : pu::PULabel::Unlabelled);
    }
    // guarantee both label states
    ds.labels[0] = pu::PULabel::Positive;
    ds.labels[n_rows - 1] = pu::PULabel::Unlabelled;
    return ds;
}

} // namespace testutil
