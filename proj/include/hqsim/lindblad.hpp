#pragma once

#include <utility>
#include <vector>

#include "hqsim/common.hpp"
#include "hqsim/operator.hpp"

namespace hqsim {

/// Open-system description: hermitian Hamiltonian plus rated collapse
/// operators. A pair (L, gamma) acts as the dissipator
/// gamma * (L rho L^+ - 1/2 {L^+ L, rho}), i.e. the collapse operator
/// applied to the state is sqrt(gamma) * L.
struct CollapseChannel {
  Operator op;
  double rate = 0.0;
};

class LindbladModel {
 public:
  LindbladModel() = default;

  LindbladModel(Operator hamiltonian, std::vector<CollapseChannel> collapses)
      : hamiltonian_(std::move(hamiltonian)),
        collapses_(std::move(collapses)) {
    if (!hamiltonian_.is_hermitian(1e-10))
      throw InvalidArgument("Lindblad Hamiltonian must be hermitian");
    for (const auto& c : collapses_) {
      if (c.rate < 0)
        throw InvalidArgument("collapse rates must be non-negative");
      if (!(c.op.space() == hamiltonian_.space()))
        throw InvalidArgument(
            "collapse operator space differs from Hamiltonian space");
    }
  }

  const Operator& hamiltonian() const { return hamiltonian_; }
  const std::vector<CollapseChannel>& collapses() const { return collapses_; }
  const CompositeSpace& space() const { return hamiltonian_.space(); }

 private:
  Operator hamiltonian_;
  std::vector<CollapseChannel> collapses_;
};

}  // namespace hqsim
