#include "ewc/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

#include "ewc/errors.hpp"
#include "ewc/rng.hpp"

namespace ewc {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;  // 2051
constexpr std::uint32_t kLabelsMagic = 0x00000801;  // 2049

bool has_gz_suffix(const std::string& path) {
    return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

std::vector<unsigned char> read_all_bytes(const std::string& path) {
    std::vector<unsigned char> bytes;
    if (has_gz_suffix(path)) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (!f) throw IoError("cannot open " + path);
        unsigned char buf[1 << 16];
        int n;
        while ((n = gzread(f, buf, sizeof buf)) > 0) {
            bytes.insert(bytes.end(), buf, buf + n);
        }
        const bool bad = n < 0;
        gzclose(f);
        if (bad) throw IoError("gzip read failed for " + path);
    } else {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open " + path);
        bytes.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    }
    return bytes;
}

void write_all_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
    if (has_gz_suffix(path)) {
        gzFile f = gzopen(path.c_str(), "wb");
        if (!f) throw IoError("cannot open " + path + " for writing");
        const int written = gzwrite(f, bytes.data(), static_cast<unsigned>(bytes.size()));
        gzclose(f);
        if (written != static_cast<int>(bytes.size())) {
            throw IoError("gzip write failed for " + path);
        }
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open " + path + " for writing");
        f.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
        if (!f) throw IoError("write failed for " + path);
    }
}

// Big-endian u32 reader with truncation checking.
class IdxReader {
public:
    IdxReader(std::vector<unsigned char> bytes, std::string path)
        : bytes_(std::move(bytes)), path_(std::move(path)) {}

    std::uint32_t read_u32() {
        if (pos_ + 4 > bytes_.size()) {
            throw TruncatedFileError("truncated IDX header in " + path_);
        }
        std::uint32_t v = (std::uint32_t{bytes_[pos_]} << 24) |
                          (std::uint32_t{bytes_[pos_ + 1]} << 16) |
                          (std::uint32_t{bytes_[pos_ + 2]} << 8) |
                          std::uint32_t{bytes_[pos_ + 3]};
        pos_ += 4;
        return v;
    }

    const unsigned char* take(std::size_t n) {
        if (pos_ + n > bytes_.size()) {
            throw TruncatedFileError("truncated IDX payload in " + path_);
        }
        const unsigned char* p = bytes_.data() + pos_;
        pos_ += n;
        return p;
    }

private:
    std::vector<unsigned char> bytes_;
    std::string path_;
    std::size_t pos_ = 0;
};

void append_u32_be(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v >> 24));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v));
}

Dataset gather_rows(const Dataset& ds, const std::vector<int>& rows, std::string name) {
    Dataset out;
    out.name = std::move(name);
    out.rows = ds.rows;
    out.cols = ds.cols;
    out.images.resize(static_cast<Eigen::Index>(rows.size()), ds.images.cols());
    out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.images.row(static_cast<Eigen::Index>(i)) = ds.images.row(rows[i]);
        out.labels.push_back(ds.labels[rows[i]]);
    }
    return out;
}

}  // namespace

int Dataset::num_classes() const {
    int max_label = -1;
    for (int y : labels) max_label = std::max(max_label, y);
    return max_label + 1;
}

void Dataset::validate() const {
    if (static_cast<int>(labels.size()) != size()) {
        throw DimensionError("Dataset: label count does not match image rows");
    }
    if (rows * cols != pixels()) {
        throw DimensionError("Dataset: pixel grid does not match image width");
    }
    if (size() > 0) {
        const double lo = images.minCoeff();
        const double hi = images.maxCoeff();
        if (lo < 0.0 || hi > 1.0) {
            throw DimensionError("Dataset: pixel values outside [0,1]");
        }
    }
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    IdxReader images(read_all_bytes(images_path), images_path);
    const std::uint32_t image_magic = images.read_u32();
    if (image_magic != kImagesMagic) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "bad IDX magic 0x%08x (want 0x%08x) in %s",
                      image_magic, kImagesMagic, images_path.c_str());
        throw BadMagicError(msg);
    }
    const std::uint32_t count = images.read_u32();
    const std::uint32_t rows = images.read_u32();
    const std::uint32_t cols = images.read_u32();
    const std::size_t pixels = std::size_t{rows} * cols;
    const unsigned char* pix = images.take(count * pixels);

    IdxReader labels(read_all_bytes(labels_path), labels_path);
    const std::uint32_t label_magic = labels.read_u32();
    if (label_magic != kLabelsMagic) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "bad IDX magic 0x%08x (want 0x%08x) in %s",
                      label_magic, kLabelsMagic, labels_path.c_str());
        throw BadMagicError(msg);
    }
    const std::uint32_t label_count = labels.read_u32();
    if (label_count != count) {
        throw CountMismatchError("IDX image count " + std::to_string(count) +
                                 " != label count " + std::to_string(label_count));
    }
    const unsigned char* lab = labels.take(label_count);

    Dataset ds;
    ds.name = images_path;
    ds.rows = static_cast<int>(rows);
    ds.cols = static_cast<int>(cols);
    ds.images.resize(count, static_cast<Eigen::Index>(pixels));
    for (std::uint32_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < pixels; ++j) {
            ds.images(i, static_cast<Eigen::Index>(j)) = pix[i * pixels + j] / 255.0;
        }
    }
    ds.labels.assign(lab, lab + label_count);
    return ds;
}

void write_idx(const Dataset& ds, const std::string& images_path,
               const std::string& labels_path) {
    ds.validate();
    std::vector<unsigned char> img;
    img.reserve(16 + static_cast<std::size_t>(ds.size()) * ds.pixels());
    append_u32_be(img, kImagesMagic);
    append_u32_be(img, static_cast<std::uint32_t>(ds.size()));
    append_u32_be(img, static_cast<std::uint32_t>(ds.rows));
    append_u32_be(img, static_cast<std::uint32_t>(ds.cols));
    for (int i = 0; i < ds.size(); ++i) {
        for (int j = 0; j < ds.pixels(); ++j) {
            img.push_back(static_cast<unsigned char>(std::lround(ds.images(i, j) * 255.0)));
        }
    }
    write_all_bytes(images_path, img);

    std::vector<unsigned char> lab;
    lab.reserve(8 + ds.labels.size());
    append_u32_be(lab, kLabelsMagic);
    append_u32_be(lab, static_cast<std::uint32_t>(ds.labels.size()));
    for (int y : ds.labels) lab.push_back(static_cast<unsigned char>(y));
    write_all_bytes(labels_path, lab);
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double valid_fraction,
                                  std::uint64_t seed) {
    if (valid_fraction <= 0.0 || valid_fraction >= 1.0) {
        throw DimensionError("split: valid_fraction must lie in (0, 1)");
    }
    std::vector<int> order(ds.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, "split"));
    shuffle_in_place(order, rng);

    const int n_valid = static_cast<int>(std::llround(ds.size() * valid_fraction));
    std::vector<int> valid_rows(order.begin(), order.begin() + n_valid);
    std::vector<int> train_rows(order.begin() + n_valid, order.end());
    return {gather_rows(ds, train_rows, ds.name + "/train"),
            gather_rows(ds, valid_rows, ds.name + "/valid")};
}

Dataset subsample(const Dataset& ds, int n, std::uint64_t seed) {
    std::vector<int> order(ds.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, "subsample"));
    shuffle_in_place(order, rng);
    order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(n)));
    return gather_rows(ds, order, ds.name + "/sub");
}

}  // namespace ewc
