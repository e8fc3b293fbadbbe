#include "shapnn/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "shapnn/rng.hpp"

namespace shapnn {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::ifstream& in, const std::string& path) {
    unsigned char raw[4];
    if (!in.read(reinterpret_cast<char*>(raw), 4))
        throw IoError("truncated IDX file: " + path);
    return (std::uint32_t{raw[0]} << 24) | (std::uint32_t{raw[1]} << 16) |
           (std::uint32_t{raw[2]} << 8) | std::uint32_t{raw[3]};
}

} // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream images(images_path, std::ios::binary);
    if (!images) throw IoError("cannot open IDX image file: " + images_path);
    std::ifstream labels(labels_path, std::ios::binary);
    if (!labels) throw IoError("cannot open IDX label file: " + labels_path);

    char magic_buf[32];
    const std::uint32_t image_magic = read_be32(images, images_path);
    if (image_magic != kImageMagic) {
        std::snprintf(magic_buf, sizeof magic_buf, "0x%08x", image_magic);
        throw ValidationError("bad IDX image magic " + std::string(magic_buf) + " in " +
                              images_path);
    }
    const std::uint32_t label_magic = read_be32(labels, labels_path);
    if (label_magic != kLabelMagic) {
        std::snprintf(magic_buf, sizeof magic_buf, "0x%08x", label_magic);
        throw ValidationError("bad IDX label magic " + std::string(magic_buf) + " in " +
                              labels_path);
    }

    const std::uint32_t image_count = read_be32(images, images_path);
    const std::uint32_t rows = read_be32(images, images_path);
    const std::uint32_t cols = read_be32(images, images_path);
    const std::uint32_t label_count = read_be32(labels, labels_path);
    if (image_count != label_count)
        throw ValidationError("IDX count mismatch: " + std::to_string(image_count) +
                              " images vs " + std::to_string(label_count) + " labels");

    const std::size_t dims = std::size_t{rows} * cols;
    Dataset data;
    data.dims = static_cast<int>(dims);
    data.features.resize(image_count * dims);
    data.labels.resize(image_count);

    std::vector<unsigned char> pixel_row(dims);
    for (std::uint32_t i = 0; i < image_count; ++i) {
        if (!images.read(reinterpret_cast<char*>(pixel_row.data()),
                         static_cast<std::streamsize>(dims)))
            throw IoError("truncated IDX file: " + images_path);
        double* out = data.features.data() + std::size_t{i} * dims;
        for (std::size_t d = 0; d < dims; ++d)
            out[d] = static_cast<double>(pixel_row[d]) / 255.0;
    }
    std::vector<unsigned char> raw_labels(image_count);
    if (image_count > 0 &&
        !labels.read(reinterpret_cast<char*>(raw_labels.data()),
                     static_cast<std::streamsize>(image_count)))
        throw IoError("truncated IDX file: " + labels_path);

    int max_label = 0;
    for (std::uint32_t i = 0; i < image_count; ++i) {
        data.labels[i] = raw_labels[i];
        max_label = std::max(max_label, data.labels[i]);
    }
    data.classes = max_label + 1;
    return data;
}

Dataset synth_blobs(int classes, int dims, int per_class, double spread, std::uint64_t seed) {
    if (classes < 2) throw DomainError("synth_blobs: need at least two classes");
    if (per_class < 1) throw DomainError("synth_blobs: need at least one row per class");
    if (dims < 1) throw DomainError("synth_blobs: need at least one dimension");
    if (!(spread > 0.0)) throw DomainError("synth_blobs: spread must be positive");

    // class c sits near simplex corner 2 * e_{c mod dims}, bumped outward
    // each time the corners wrap; the jitter keeps means seed-dependent
    const double corner_scale = 2.0;
    std::vector<double> means(static_cast<std::size_t>(classes) * dims, 0.0);
    Rng mean_rng(derive_seed(seed, 0x6d65616eULL));
    for (int c = 0; c < classes; ++c) {
        double* mean = means.data() + static_cast<std::size_t>(c) * dims;
        mean[c % dims] = corner_scale * (1.0 + static_cast<double>(c / dims));
        for (int d = 0; d < dims; ++d) mean[d] += mean_rng.uniform(-0.1, 0.1);
    }

    Dataset data;
    data.dims = dims;
    data.classes = classes;
    data.features.resize(static_cast<std::size_t>(classes) * per_class * dims);
    data.labels.resize(static_cast<std::size_t>(classes) * per_class);

    Rng noise_rng(derive_seed(seed, 0x626c6f62ULL));
    std::size_t row = 0;
    for (int c = 0; c < classes; ++c) {
        const double* mean = means.data() + static_cast<std::size_t>(c) * dims;
        for (int r = 0; r < per_class; ++r, ++row) {
            double* out = data.features.data() + row * dims;
            for (int d = 0; d < dims; ++d) out[d] = mean[d] + spread * noise_rng.normal();
            data.labels[row] = c;
        }
    }
    return data;
}

Dataset load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open CSV file: " + path);

    Dataset data;
    std::string line;
    int line_no = 0;
    int width = -1;
    int max_label = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && has_header) continue;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) {
            std::size_t consumed = 0;
            double value = 0.0;
            try {
                value = std::stod(cell, &consumed);
            } catch (const std::exception&) {
                throw ValidationError("CSV " + path + " line " + std::to_string(line_no) +
                                      ": non-numeric cell '" + cell + "'");
            }
            while (consumed < cell.size() && std::isspace(static_cast<unsigned char>(cell[consumed])))
                ++consumed;
            if (consumed != cell.size())
                throw ValidationError("CSV " + path + " line " + std::to_string(line_no) +
                                      ": non-numeric cell '" + cell + "'");
            cells.push_back(value);
        }
        if (width == -1) {
            if (cells.size() < 2)
                throw ValidationError("CSV " + path + ": rows need a label and at least one feature");
            width = static_cast<int>(cells.size());
        } else if (static_cast<int>(cells.size()) != width) {
            throw ValidationError("CSV " + path + " line " + std::to_string(line_no) +
                                  ": ragged row (" + std::to_string(cells.size()) +
                                  " cells, expected " + std::to_string(width) + ")");
        }
        const double label_cell = cells[0];
        const int label = static_cast<int>(label_cell);
        if (label < 0 || static_cast<double>(label) != label_cell)
            throw ValidationError("CSV " + path + " line " + std::to_string(line_no) +
                                  ": label must be a nonnegative integer");
        data.labels.push_back(label);
        data.features.insert(data.features.end(), cells.begin() + 1, cells.end());
        max_label = std::max(max_label, label);
    }
    if (data.labels.empty()) throw ValidationError("CSV " + path + ": no data rows");
    data.dims = width - 1;
    data.classes = max_label + 1;
    return data;
}

Splits split(const Dataset& data, const std::array<double, 3>& fractions, std::uint64_t seed) {
    double total = 0.0;
    for (double f : fractions) {
        if (f < 0.0) throw DomainError("split: fractions must be nonnegative");
        total += f;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("split: fractions must sum to 1");
    const int n = data.size();

    // floor allocation, remainder to the earliest parts
    std::array<int, 3> counts{};
    int assigned = 0;
    for (int p = 0; p < 3; ++p) {
        counts[p] = static_cast<int>(std::floor(fractions[p] * n + 1e-9));
        assigned += counts[p];
    }
    for (int p = 0; assigned < n; p = (p + 1) % 3) {
        ++counts[p];
        ++assigned;
    }
    for (int p = 0; p < 3; ++p)
        if (counts[p] < 1)
            throw DomainError("split: every part must be non-empty (got " +
                              std::to_string(counts[0]) + "/" + std::to_string(counts[1]) +
                              "/" + std::to_string(counts[2]) + ")");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, 0x73706c74ULL));
    rng.shuffle(order);

    Splits out;
    Dataset* parts[3] = {&out.train, &out.validation, &out.test};
    int cursor = 0;
    for (int p = 0; p < 3; ++p) {
        Dataset& part = *parts[p];
        part.dims = data.dims;
        part.classes = data.classes;
        part.features.reserve(static_cast<std::size_t>(counts[p]) * data.dims);
        part.labels.reserve(static_cast<std::size_t>(counts[p]));
        for (int k = 0; k < counts[p]; ++k, ++cursor) {
            const int src = order[static_cast<std::size_t>(cursor)];
            const double* row = data.row(src);
            part.features.insert(part.features.end(), row, row + data.dims);
            part.labels.push_back(data.labels[static_cast<std::size_t>(src)]);
        }
    }
    return out;
}

} // namespace shapnn
