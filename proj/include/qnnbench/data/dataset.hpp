#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qnnbench::data {

enum class Provenance { Synthetic, Wine, Mnist };

std::string provenance_name(Provenance p);
Provenance parse_provenance(const std::string& name);

/// Row-major feature matrix with integer labels. Rows are stored training
/// split first, so `train` and `test` are contiguous index ranges for every
/// dataset built here.
struct Dataset {
    Provenance provenance = Provenance::Synthetic;
    std::size_t n_features = 0;
    int n_classes = 2;
    int image_side = 0; // non-zero for square images (n_features = side^2)
    std::vector<double> features;
    std::vector<int> labels;
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::optional<std::uint64_t> label_noise_seed;

    std::size_t size() const { return labels.size(); }
    std::span<const double> row(std::size_t i) const { return {features.data() + i * n_features, n_features}; }

    /// Throws std::invalid_argument on shape errors, overlapping splits,
    /// labels outside [0, n_classes) or features outside [0, pi].
    void validate() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct SyntheticOptions {
    int n_per_class = 200;
    int n_features = 16;
    int generator_layers = 2;
    std::uint64_t seed = 0;
    std::size_t max_draws = 1000000;
};

/// Generator angles theta* for the given options (uniform on [0, 2 pi)).
std::vector<double> synthetic_generator_params(const SyntheticOptions& opts);

/// Rejection-samples x ~ U[0, pi]^d labelled by the sign of <Z_0> of a QENN
/// generator at theta*, until each class has n_per_class examples. Half of
/// each class goes to the training split. Throws std::runtime_error naming
/// the class counts when max_draws is exhausted.
Dataset generate_synthetic(const SyntheticOptions& opts);

/// Comma-separated rows, class label (1..3) in column 0 and 13 attributes.
/// Keeps classes 1 and 2 (relabelled 0 and 1), splits each class in half
/// with a seeded shuffle and rescales features to [0, pi] from the training
/// split.
Dataset load_wine(const std::filesystem::path& path, std::uint64_t seed);

struct MnistOptions {
    std::size_t n_train = 2000;
    std::size_t n_test = 2000;
    int side = 10;
    std::uint64_t seed = 0;
};

/// IDX image/label pair. A seeded subsample is resized bilinearly to
/// side x side and pixel values mapped from [0, 255] to [0, pi].
Dataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels, const MnistOptions& opts);

struct IdxImages {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> pixels; // count * rows * cols
    std::size_t count() const { return rows > 0 && cols > 0 ? pixels.size() / (std::size_t(rows) * cols) : 0; }
};
IdxImages read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);

/// Bilinear resampling with pixel-centre alignment and edge clamping.
std::vector<double> resize_bilinear(std::span<const double> src, int in_h, int in_w, int out_h, int out_w);

/// Maps each feature's training-split range onto [0, pi]; test values are
/// clamped. Constant features map to 0.
void rescale_to_angles(Dataset& ds);

/// Copy with round(fraction * n_train) training labels replaced by uniform
/// draws over the classes. Test labels are untouched.
Dataset randomize_labels(const Dataset& ds, double fraction, std::uint64_t seed);

/// Header `x0,...,x{d-1},label`, training rows first, doubles printed
/// round-trip exact. read_csv treats the first half of the rows as the
/// training split.
void write_csv(const Dataset& ds, const std::filesystem::path& path);
Dataset read_csv(const std::filesystem::path& path, Provenance provenance = Provenance::Synthetic);

} // namespace qnnbench::data
