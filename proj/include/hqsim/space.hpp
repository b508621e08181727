#pragma once

#include <string>
#include <vector>

#include "hqsim/common.hpp"

namespace hqsim {

enum class ModeKind { boson, spin_half, multilevel };

/// One tensor factor of a composite Hilbert space. Bosonic modes are
/// truncated at `dim` Fock levels (states |0..dim-1>).
struct ModeSpec {
  std::string label;
  ModeKind kind = ModeKind::boson;
  int dim = 2;

  static ModeSpec boson(std::string label, int cutoff) {
    if (cutoff < 2) {
      throw InvalidArgument("boson cutoff must be >= 2, got " +
                            std::to_string(cutoff));
    }
    return {std::move(label), ModeKind::boson, cutoff};
  }
  static ModeSpec spin_half(std::string label) {
    return {std::move(label), ModeKind::spin_half, 2};
  }
  static ModeSpec multilevel(std::string label, int dim) {
    if (dim < 2) {
      throw InvalidArgument("multilevel dim must be >= 2, got " +
                            std::to_string(dim));
    }
    return {std::move(label), ModeKind::multilevel, dim};
  }

  bool operator==(const ModeSpec&) const = default;
};

/// Ordered tensor product of modes. The first mode is the slowest index
/// (leftmost Kronecker factor). Immutable after construction.
class CompositeSpace {
 public:
  CompositeSpace() = default;

  explicit CompositeSpace(std::vector<ModeSpec> modes)
      : modes_(std::move(modes)) {
    dim_ = 1;
    for (const auto& m : modes_) {
      if (m.dim < 2) throw InvalidArgument("mode dimension must be >= 2");
      for (const auto& other : modes_) {
        if (&other != &m && other.label == m.label) {
          throw InvalidArgument("duplicate mode label '" + m.label + "'");
        }
      }
      dim_ *= m.dim;
    }
    if (dim_ <= 0) throw InvalidArgument("empty composite space");
  }

  long dim() const { return dim_; }
  std::size_t mode_count() const { return modes_.size(); }
  const std::vector<ModeSpec>& modes() const { return modes_; }
  const ModeSpec& mode(std::size_t i) const { return modes_.at(i); }

  bool has_mode(const std::string& label) const {
    for (const auto& m : modes_)
      if (m.label == label) return true;
    return false;
  }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < modes_.size(); ++i)
      if (modes_[i].label == label) return i;
    throw InvalidArgument("no mode labelled '" + label + "' in space");
  }

  const ModeSpec& mode(const std::string& label) const {
    return modes_[index_of(label)];
  }

  /// Stride of mode i in the flattened basis index (first mode slowest).
  long stride(std::size_t i) const {
    long s = 1;
    for (std::size_t k = i + 1; k < modes_.size(); ++k) s *= modes_[k].dim;
    return s;
  }

  /// Flattened basis index from per-mode occupation numbers.
  long basis_index(const std::vector<int>& levels) const {
    if (levels.size() != modes_.size())
      throw InvalidArgument("level list does not match mode count");
    long idx = 0;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (levels[i] < 0 || levels[i] >= modes_[i].dim)
        throw InvalidArgument("basis level out of range for mode '" +
                              modes_[i].label + "'");
      idx += levels[i] * stride(i);
    }
    return idx;
  }

  /// Occupation of mode i in the flattened basis state `index`.
  int level_of(long index, std::size_t i) const {
    return static_cast<int>((index / stride(i)) % modes_[i].dim);
  }

  bool operator==(const CompositeSpace&) const = default;

 private:
  std::vector<ModeSpec> modes_;
  long dim_ = 1;
};

}  // namespace hqsim
