/* Copyright 2026 The newsrec Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include "newsrec/ops.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace newsrec {
namespace ops {

namespace {

using EMat =
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using CMap = Eigen::Map<const EMat>;

EMap map(Tensor& t) { return EMap(t.data.data(), t.rows(), t.cols()); }
CMap cmap(const Tensor& t) {
  return CMap(t.data.data(), t.rows(), t.cols());
}
EMap gmap(Tensor& t) { return EMap(t.grad.data(), t.rows(), t.cols()); }
CMap cgmap(const Tensor& t) {
  return CMap(t.grad.data(), t.rows(), t.cols());
}

void require(bool cond, const char* msg) {
  if (!cond) throw ShapeError(msg);
}

bool trace1(const TensorPtr& a) { return grad_enabled() && a->in_graph(); }
bool trace2(const TensorPtr& a, const TensorPtr& b) {
  return grad_enabled() && (a->in_graph() || b->in_graph());
}

}  // namespace

TensorPtr add(const TensorPtr& a, const TensorPtr& b) {
  require(a->same_shape(*b), "add: shape mismatch");
  auto out = Tensor::make(a->rows(), a->cols());
  const int64_t n = a->size();
  for (int64_t i = 0; i < n; ++i) out->data[i] = a->data[i] + b->data[i];
  if (trace2(a, b)) {
    out->parents = {a, b};
    Tensor* ap = a.get();
    Tensor* bp = b.get();
    out->backprop = [ap, bp, n](Tensor& self) {
      if (ap->in_graph()) {
        ap->ensure_grad();
        for (int64_t i = 0; i < n; ++i) ap->grad[i] += self.grad[i];
      }
      if (bp->in_graph()) {
        bp->ensure_grad();
        for (int64_t i = 0; i < n; ++i) bp->grad[i] += self.grad[i];
      }
    };
  }
  return out;
}

TensorPtr sub(const TensorPtr& a, const TensorPtr& b) {
  require(a->same_shape(*b), "sub: shape mismatch");
  auto out = Tensor::make(a->rows(), a->cols());
  const int64_t n = a->size();
  for (int64_t i = 0; i < n; ++i) out->data[i] = a->data[i] - b->data[i];
  if (trace2(a, b)) {
    out->parents = {a, b};
    Tensor* ap = a.get();
    Tensor* bp = b.get();
    out->backprop = [ap, bp, n](Tensor& self) {
      if (ap->in_graph()) {
        ap->ensure_grad();
        for (int64_t i = 0; i < n; ++i) ap->grad[i] += self.grad[i];
      }
      if (bp->in_graph()) {
        bp->ensure_grad();
        for (int64_t i = 0; i < n; ++i) bp->grad[i] -= self.grad[i];
      }
    };
  }
  return out;
}

TensorPtr mul(const TensorPtr& a, const TensorPtr& b) {
  require(a->same_shape(*b), "mul: shape mismatch");
  auto out = Tensor::make(a->rows(), a->cols());
  const int64_t n = a->size();
  for (int64_t i = 0; i < n; ++i) out->data[i] = a->data[i] * b->data[i];
  if (trace2(a, b)) {
    out->parents = {a, b};
    Tensor* ap = a.get();
    Tensor* bp = b.get();
    out->backprop = [ap, bp, n](Tensor& self) {
      if (ap->in_graph()) {
        ap->ensure_grad();
        for (int64_t i = 0; i < n; ++i)
          ap->grad[i] += self.grad[i] * bp->data[i];
      }
      if (bp->in_graph()) {
        bp->ensure_grad();
        for (int64_t i = 0; i < n; ++i)
          bp->grad[i] += self.grad[i] * ap->data[i];
      }
    };
  }
  return out;
}

TensorPtr add_n(const std::vector<TensorPtr>& xs) {
  if (xs.empty()) throw UsageError("add_n: empty operand list");
  auto out = Tensor::make(xs[0]->rows(), xs[0]->cols());
  const int64_t n = xs[0]->size();
  for (const auto& x : xs) {
    require(x->same_shape(*xs[0]), "add_n: shape mismatch");
    for (int64_t i = 0; i < n; ++i) out->data[i] += x->data[i];
  }
  bool rec = grad_enabled() &&
             std::any_of(xs.begin(), xs.end(),
                         [](const TensorPtr& x) { return x->in_graph(); });
  if (rec) {
    out->parents = xs;
    out->backprop = [n](Tensor& self) {
      for (auto& p : self.parents) {
        if (!p->in_graph()) continue;
        p->ensure_grad();
        for (int64_t i = 0; i < n; ++i) p->grad[i] += self.grad[i];
      }
    };
  }
  return out;
}

TensorPtr scale(const TensorPtr& a, Real s) {
  auto out = Tensor::make(a->rows(), a->cols());
  const int64_t n = a->size();
  for (int64_t i = 0; i < n; ++i) out->data[i] = a->data[i] * s;
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap, s, n](Tensor& self) {
      ap->ensure_grad();
      for (int64_t i = 0; i < n; ++i) ap->grad[i] += self.grad[i] * s;
    };
  }
  return out;
}

TensorPtr add_const(const TensorPtr& a, Real s) {
  auto out = Tensor::make(a->rows(), a->cols());
  const int64_t n = a->size();
  for (int64_t i = 0; i < n; ++i) out->data[i] = a->data[i] + s;
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap, n](Tensor& self) {
      ap->ensure_grad();
      for (int64_t i = 0; i < n; ++i) ap->grad[i] += self.grad[i];
    };
  }
  return out;
}

TensorPtr neg(const TensorPtr& a) { return scale(a, Real(-1)); }

TensorPtr tanh_(const TensorPtr& a) {
  auto out = Tensor::make(a->rows(), a->cols());
  const int64_t n = a->size();
  for (int64_t i = 0; i < n; ++i) out->data[i] = std::tanh(a->data[i]);
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap, n](Tensor& self) {
      ap->ensure_grad();
      for (int64_t i = 0; i < n; ++i) {
        Real y = self.data[i];
        ap->grad[i] += self.grad[i] * (Real(1) - y * y);
      }
    };
  }
  return out;
}

TensorPtr sigmoid_(const TensorPtr& a) {
  auto out = Tensor::make(a->rows(), a->cols());
  const int64_t n = a->size();
  for (int64_t i = 0; i < n; ++i)
    out->data[i] = Real(1) / (Real(1) + std::exp(-a->data[i]));
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap, n](Tensor& self) {
      ap->ensure_grad();
      for (int64_t i = 0; i < n; ++i) {
        Real y = self.data[i];
        ap->grad[i] += self.grad[i] * y * (Real(1) - y);
      }
    };
  }
  return out;
}

TensorPtr relu_(const TensorPtr& a) {
  auto out = Tensor::make(a->rows(), a->cols());
  const int64_t n = a->size();
  for (int64_t i = 0; i < n; ++i)
    out->data[i] = a->data[i] > Real(0) ? a->data[i] : Real(0);
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap, n](Tensor& self) {
      ap->ensure_grad();
      for (int64_t i = 0; i < n; ++i)
        if (ap->data[i] > Real(0)) ap->grad[i] += self.grad[i];
    };
  }
  return out;
}

TensorPtr matmul(const TensorPtr& a, const TensorPtr& b) {
  require(a->cols() == b->rows(), "matmul: inner dimensions disagree");
  auto out = Tensor::make(a->rows(), b->cols());
  map(*out).noalias() = cmap(*a) * cmap(*b);
  if (trace2(a, b)) {
    out->parents = {a, b};
    Tensor* ap = a.get();
    Tensor* bp = b.get();
    out->backprop = [ap, bp](Tensor& self) {
      if (ap->in_graph()) {
        ap->ensure_grad();
        gmap(*ap).noalias() += cgmap(self) * cmap(*bp).transpose();
      }
      if (bp->in_graph()) {
        bp->ensure_grad();
        gmap(*bp).noalias() += cmap(*ap).transpose() * cgmap(self);
      }
    };
  }
  return out;
}

TensorPtr transpose(const TensorPtr& a) {
  auto out = Tensor::make(a->cols(), a->rows());
  map(*out) = cmap(*a).transpose();
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap](Tensor& self) {
      ap->ensure_grad();
      gmap(*ap) += cgmap(self).transpose();
    };
  }
  return out;
}

TensorPtr add_row_broadcast(const TensorPtr& a, const TensorPtr& row) {
  require(row->rows() == 1 && row->cols() == a->cols(),
          "add_row_broadcast: row must be 1 x cols(a)");
  auto out = Tensor::make(a->rows(), a->cols());
  const int r = a->rows(), c = a->cols();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out->at(i, j) = a->at(i, j) + row->data[j];
  if (trace2(a, row)) {
    out->parents = {a, row};
    Tensor* ap = a.get();
    Tensor* rp = row.get();
    out->backprop = [ap, rp, r, c](Tensor& self) {
      if (ap->in_graph()) {
        ap->ensure_grad();
        for (int64_t i = 0; i < static_cast<int64_t>(r) * c; ++i)
          ap->grad[i] += self.grad[i];
      }
      if (rp->in_graph()) {
        rp->ensure_grad();
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < c; ++j)
            rp->grad[j] += self.grad[static_cast<size_t>(i) * c + j];
      }
    };
  }
  return out;
}

TensorPtr mul_row_broadcast(const TensorPtr& a, const TensorPtr& row) {
  require(row->rows() == 1 && row->cols() == a->cols(),
          "mul_row_broadcast: row must be 1 x cols(a)");
  auto out = Tensor::make(a->rows(), a->cols());
  const int r = a->rows(), c = a->cols();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out->at(i, j) = a->at(i, j) * row->data[j];
  if (trace2(a, row)) {
    out->parents = {a, row};
    Tensor* ap = a.get();
    Tensor* rp = row.get();
    out->backprop = [ap, rp, r, c](Tensor& self) {
      if (ap->in_graph()) {
        ap->ensure_grad();
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < c; ++j)
            ap->grad[static_cast<size_t>(i) * c + j] +=
                self.grad[static_cast<size_t>(i) * c + j] * rp->data[j];
      }
      if (rp->in_graph()) {
        rp->ensure_grad();
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < c; ++j)
            rp->grad[j] += self.grad[static_cast<size_t>(i) * c + j] *
                           ap->data[static_cast<size_t>(i) * c + j];
      }
    };
  }
  return out;
}

TensorPtr mul_scalar_node(const TensorPtr& a, const TensorPtr& s) {
  require(s->size() == 1, "mul_scalar_node: scalar must be 1x1");
  auto out = Tensor::make(a->rows(), a->cols());
  const Real sv = s->data[0];
  const int64_t n = a->size();
  for (int64_t i = 0; i < n; ++i) out->data[i] = a->data[i] * sv;
  if (trace2(a, s)) {
    out->parents = {a, s};
    Tensor* ap = a.get();
    Tensor* sp = s.get();
    out->backprop = [ap, sp, sv, n](Tensor& self) {
      if (ap->in_graph()) {
        ap->ensure_grad();
        for (int64_t i = 0; i < n; ++i) ap->grad[i] += self.grad[i] * sv;
      }
      if (sp->in_graph()) {
        sp->ensure_grad();
        Real acc = 0;
        for (int64_t i = 0; i < n; ++i) acc += self.grad[i] * ap->data[i];
        sp->grad[0] += acc;
      }
    };
  }
  return out;
}

TensorPtr concat_cols(const std::vector<TensorPtr>& xs) {
  if (xs.empty()) throw UsageError("concat_cols: empty operand list");
  const int r = xs[0]->rows();
  int total = 0;
  for (const auto& x : xs) {
    require(x->rows() == r, "concat_cols: row counts disagree");
    total += x->cols();
  }
  auto out = Tensor::make(r, total);
  int off = 0;
  for (const auto& x : xs) {
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < x->cols(); ++j) out->at(i, off + j) = x->at(i, j);
    off += x->cols();
  }
  bool rec = grad_enabled() &&
             std::any_of(xs.begin(), xs.end(),
                         [](const TensorPtr& x) { return x->in_graph(); });
  if (rec) {
    out->parents = xs;
    out->backprop = [r](Tensor& self) {
      int off = 0;
      for (auto& p : self.parents) {
        const int pc = p->cols();
        if (p->in_graph()) {
          p->ensure_grad();
          for (int i = 0; i < r; ++i)
            for (int j = 0; j < pc; ++j)
              p->grad[static_cast<size_t>(i) * pc + j] +=
                  self.grad[static_cast<size_t>(i) * self.cols() + off + j];
        }
        off += pc;
      }
    };
  }
  return out;
}

TensorPtr slice_cols(const TensorPtr& a, int lo, int hi) {
  require(0 <= lo && lo < hi && hi <= a->cols(), "slice_cols: bad range");
  const int r = a->rows(), w = hi - lo;
  auto out = Tensor::make(r, w);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < w; ++j) out->at(i, j) = a->at(i, lo + j);
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap, lo, r, w](Tensor& self) {
      ap->ensure_grad();
      const int ac = ap->cols();
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < w; ++j)
          ap->grad[static_cast<size_t>(i) * ac + lo + j] +=
              self.grad[static_cast<size_t>(i) * w + j];
    };
  }
  return out;
}

TensorPtr stack_rows(const std::vector<TensorPtr>& rows) {
  if (rows.empty()) throw UsageError("stack_rows: empty operand list");
  const int c = rows[0]->cols();
  for (const auto& x : rows)
    require(x->rows() == 1 && x->cols() == c, "stack_rows: rows must be 1 x c");
  auto out = Tensor::make(static_cast<int>(rows.size()), c);
  for (size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i]->data.begin(), rows[i]->data.end(),
              out->data.begin() + static_cast<int64_t>(i) * c);
  bool rec = grad_enabled() &&
             std::any_of(rows.begin(), rows.end(),
                         [](const TensorPtr& x) { return x->in_graph(); });
  if (rec) {
    out->parents = rows;
    out->backprop = [c](Tensor& self) {
      for (size_t i = 0; i < self.parents.size(); ++i) {
        auto& p = self.parents[i];
        if (!p->in_graph()) continue;
        p->ensure_grad();
        for (int j = 0; j < c; ++j)
          p->grad[j] += self.grad[i * static_cast<size_t>(c) + j];
      }
    };
  }
  return out;
}

TensorPtr slice_row(const TensorPtr& a, int row) {
  require(0 <= row && row < a->rows(), "slice_row: index out of range");
  const int c = a->cols();
  auto out = Tensor::make(1, c);
  for (int j = 0; j < c; ++j) out->data[j] = a->at(row, j);
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap, row, c](Tensor& self) {
      ap->ensure_grad();
      for (int j = 0; j < c; ++j)
        ap->grad[static_cast<size_t>(row) * c + j] += self.grad[j];
    };
  }
  return out;
}

TensorPtr gather_rows(const TensorPtr& table, const std::vector<int>& idx) {
  if (idx.empty()) throw UsageError("gather_rows: empty index list");
  const int c = table->cols();
  for (int i : idx)
    if (i < 0 || i >= table->rows())
      throw DataError("gather_rows: index " + std::to_string(i) +
                      " out of range [0, " + std::to_string(table->rows()) +
                      ")");
  auto out = Tensor::make(static_cast<int>(idx.size()), c);
  for (size_t r = 0; r < idx.size(); ++r)
    for (int j = 0; j < c; ++j) out->at(static_cast<int>(r), j) =
        table->at(idx[r], j);
  if (trace1(table)) {
    out->parents = {table};
    Tensor* tp = table.get();
    auto saved = idx;
    out->backprop = [tp, saved, c](Tensor& self) {
      tp->ensure_grad();
      for (size_t r = 0; r < saved.size(); ++r)
        for (int j = 0; j < c; ++j)
          tp->grad[static_cast<size_t>(saved[r]) * c + j] +=
              self.grad[r * static_cast<size_t>(c) + j];
    };
  }
  return out;
}

TensorPtr sum_all(const TensorPtr& a) {
  auto out = Tensor::make(1, 1);
  Real acc = 0;
  for (Real v : a->data) acc += v;
  out->data[0] = acc;
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap](Tensor& self) {
      ap->ensure_grad();
      for (auto& g : ap->grad) g += self.grad[0];
    };
  }
  return out;
}

TensorPtr mean_all(const TensorPtr& a) {
  return scale(sum_all(a), Real(1) / static_cast<Real>(a->size()));
}

TensorPtr row_softmax(const TensorPtr& a, const Mask* valid_cols) {
  const int r = a->rows(), c = a->cols();
  if (valid_cols) {
    require(static_cast<int>(valid_cols->size()) == c,
            "row_softmax: mask length must equal column count");
    if (std::none_of(valid_cols->begin(), valid_cols->end(),
                     [](uint8_t v) { return v != 0; }))
      throw NumericError("row_softmax: all columns masked");
  }
  auto out = Tensor::make(r, c);
  for (int i = 0; i < r; ++i) {
    Real mx = -std::numeric_limits<Real>::infinity();
    for (int j = 0; j < c; ++j)
      if (!valid_cols || (*valid_cols)[j]) mx = std::max(mx, a->at(i, j));
    Real denom = 0;
    for (int j = 0; j < c; ++j) {
      if (!valid_cols || (*valid_cols)[j]) {
        Real e = std::exp(a->at(i, j) - mx);
        out->at(i, j) = e;
        denom += e;
      } else {
        out->at(i, j) = 0;
      }
    }
    for (int j = 0; j < c; ++j) out->at(i, j) /= denom;
  }
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap, r, c](Tensor& self) {
      ap->ensure_grad();
      for (int i = 0; i < r; ++i) {
        Real dot = 0;
        for (int j = 0; j < c; ++j)
          dot += self.grad[static_cast<size_t>(i) * c + j] *
                 self.data[static_cast<size_t>(i) * c + j];
        for (int j = 0; j < c; ++j) {
          const size_t k = static_cast<size_t>(i) * c + j;
          ap->grad[k] += self.data[k] * (self.grad[k] - dot);
        }
      }
    };
  }
  return out;
}

TensorPtr log_softmax_rows(const TensorPtr& a) {
  const int r = a->rows(), c = a->cols();
  auto out = Tensor::make(r, c);
  for (int i = 0; i < r; ++i) {
    Real mx = a->at(i, 0);
    for (int j = 1; j < c; ++j) mx = std::max(mx, a->at(i, j));
    Real denom = 0;
    for (int j = 0; j < c; ++j) denom += std::exp(a->at(i, j) - mx);
    const Real lse = mx + std::log(denom);
    for (int j = 0; j < c; ++j) out->at(i, j) = a->at(i, j) - lse;
  }
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap, r, c](Tensor& self) {
      ap->ensure_grad();
      for (int i = 0; i < r; ++i) {
        Real gsum = 0;
        for (int j = 0; j < c; ++j)
          gsum += self.grad[static_cast<size_t>(i) * c + j];
        for (int j = 0; j < c; ++j) {
          const size_t k = static_cast<size_t>(i) * c + j;
          ap->grad[k] += self.grad[k] - std::exp(self.data[k]) * gsum;
        }
      }
    };
  }
  return out;
}

TensorPtr layer_norm_rows(const TensorPtr& a, Real eps) {
  if (eps <= 0) throw ConfigError("layer_norm_rows: eps must be positive");
  const int r = a->rows(), c = a->cols();
  auto out = Tensor::make(r, c);
  std::vector<Real> inv_std(r);
  for (int i = 0; i < r; ++i) {
    Real mean = 0;
    for (int j = 0; j < c; ++j) mean += a->at(i, j);
    mean /= static_cast<Real>(c);
    Real var = 0;
    for (int j = 0; j < c; ++j) {
      Real d = a->at(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<Real>(c);
    inv_std[i] = Real(1) / std::sqrt(var + eps);
    for (int j = 0; j < c; ++j)
      out->at(i, j) = (a->at(i, j) - mean) * inv_std[i];
  }
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap, inv_std, r, c](Tensor& self) {
      ap->ensure_grad();
      for (int i = 0; i < r; ++i) {
        Real gmean = 0, gydot = 0;
        for (int j = 0; j < c; ++j) {
          const size_t k = static_cast<size_t>(i) * c + j;
          gmean += self.grad[k];
          gydot += self.grad[k] * self.data[k];
        }
        gmean /= static_cast<Real>(c);
        gydot /= static_cast<Real>(c);
        for (int j = 0; j < c; ++j) {
          const size_t k = static_cast<size_t>(i) * c + j;
          ap->grad[k] +=
              inv_std[i] * (self.grad[k] - gmean - self.data[k] * gydot);
        }
      }
    };
  }
  return out;
}

TensorPtr row_l2_normalize(const TensorPtr& a) {
  const int r = a->rows(), c = a->cols();
  auto out = Tensor::make(r, c);
  std::vector<Real> norms(r);
  for (int i = 0; i < r; ++i) {
    Real sq = 0;
    for (int j = 0; j < c; ++j) sq += a->at(i, j) * a->at(i, j);
    Real nrm = std::sqrt(sq);
    if (!(nrm > Real(1e-12)))
      throw NumericError("row_l2_normalize: zero-norm row at index " +
                         std::to_string(i));
    norms[i] = nrm;
    for (int j = 0; j < c; ++j) out->at(i, j) = a->at(i, j) / nrm;
  }
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap, norms, r, c](Tensor& self) {
      ap->ensure_grad();
      for (int i = 0; i < r; ++i) {
        Real dot = 0;
        for (int j = 0; j < c; ++j) {
          const size_t k = static_cast<size_t>(i) * c + j;
          dot += self.grad[k] * self.data[k];
        }
        for (int j = 0; j < c; ++j) {
          const size_t k = static_cast<size_t>(i) * c + j;
          ap->grad[k] += (self.grad[k] - self.data[k] * dot) / norms[i];
        }
      }
    };
  }
  return out;
}

TensorPtr dropout(const TensorPtr& a, Real rate, bool train, Rng& rng) {
  if (rate < 0 || rate >= 1)
    throw ConfigError("dropout: rate must be in [0, 1)");
  if (!train || rate == 0) return a;
  const int64_t n = a->size();
  std::vector<uint8_t> keep(n);
  const Real inv_keep = Real(1) / (Real(1) - rate);
  auto out = Tensor::make(a->rows(), a->cols());
  for (int64_t i = 0; i < n; ++i) {
    keep[i] = rng.uniform() >= rate ? 1 : 0;
    out->data[i] = keep[i] ? a->data[i] * inv_keep : Real(0);
  }
  if (trace1(a)) {
    out->parents = {a};
    Tensor* ap = a.get();
    out->backprop = [ap, keep = std::move(keep), inv_keep, n](Tensor& self) {
      ap->ensure_grad();
      for (int64_t i = 0; i < n; ++i)
        if (keep[i]) ap->grad[i] += self.grad[i] * inv_keep;
    };
  }
  return out;
}

TensorPtr sinusoidal_pe(int count, int dim) {
  if (count < 1) throw ConfigError("sinusoidal_pe: count must be >= 1");
  if (dim < 2 || dim % 2 != 0)
    throw ConfigError("sinusoidal_pe: dim must be even and >= 2");
  auto out = Tensor::make(count, dim);
  for (int pos = 0; pos < count; ++pos) {
    for (int i = 0; 2 * i < dim; ++i) {
      const double angle =
          pos / std::pow(10000.0, (2.0 * i) / static_cast<double>(dim));
      out->at(pos, 2 * i) = static_cast<Real>(std::sin(angle));
      out->at(pos, 2 * i + 1) = static_cast<Real>(std::cos(angle));
    }
  }
  return out;
}

}  // namespace ops
}  // namespace newsrec
