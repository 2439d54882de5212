#include "lu_factor.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

namespace oeh::milp::detail {

namespace {

constexpr double kThreshold = 0.1;
constexpr double kSingular = 1e-11;
constexpr int kSearchDepth = 4;

inline std::size_t at(int i) { return static_cast<std::size_t>(i); }

// Doubly linked lists of rows or columns keyed by their active count.
struct Buckets {
  std::vector<int> head, next, prev, count;

  void init(int n) {
    head.assign(at(n) + 1, -1);
    next.assign(at(n), -1);
    prev.assign(at(n), -1);
    count.assign(at(n), 0);
  }
  void insert(int i, int c) {
    count[at(i)] = c;
    prev[at(i)] = -1;
    next[at(i)] = head[at(c)];
    if (head[at(c)] >= 0) prev[at(head[at(c)])] = i;
    head[at(c)] = i;
  }
  void remove(int i) {
    if (prev[at(i)] >= 0) next[at(prev[at(i)])] = next[at(i)];
    else head[at(count[at(i)])] = next[at(i)];
    if (next[at(i)] >= 0) prev[at(next[at(i)])] = prev[at(i)];
  }
  void move(int i, int c) {
    if (count[at(i)] == c) return;
    remove(i);
    insert(i, c);
  }
};

template <class T>
void swap_pop(std::vector<T>& v, std::size_t k) {
  v[k] = v.back();
  v.pop_back();
}

}  // namespace

bool MarkowitzLU::factor(int m, const std::vector<int>& start, const std::vector<int>& index, const std::vector<double>& value) {
  m_ = m;
  prow_.assign(at(m), -1);
  pcol_.assign(at(m), -1);
  diag_.assign(at(m), 0.0);
  l_start_.assign(1, 0);
  l_index_.clear();
  l_value_.clear();
  ur_start_.assign(1, 0);
  ur_index_.clear();
  ur_value_.clear();
  work_.assign(at(m), 0.0);

  std::vector<std::vector<int>> rcol(at(m));
  std::vector<std::vector<double>> rval(at(m));
  std::vector<std::vector<int>> crow(at(m));
  for (int c = 0; c < m; ++c) {
    for (int p = start[at(c)]; p < start[at(c) + 1]; ++p) {
      if (value[at(p)] == 0.0) continue;
      const int i = index[at(p)];
      rcol[at(i)].push_back(c);
      rval[at(i)].push_back(value[at(p)]);
      crow[at(c)].push_back(i);
    }
  }
  Buckets cb, rb;
  cb.init(m);
  rb.init(m);
  for (int i = 0; i < m; ++i) {
    cb.insert(i, static_cast<int>(crow[at(i)].size()));
    rb.insert(i, static_cast<int>(rcol[at(i)].size()));
  }

  auto entry = [&](int r, int c) -> std::size_t {
    const auto& cols = rcol[at(r)];
    for (std::size_t q = 0; q < cols.size(); ++q) {
      if (cols[q] == c) return q;
    }
    return cols.size();
  };
  auto column_max = [&](int c) {
    double mx = 0.0;
    for (int r : crow[at(c)]) mx = std::max(mx, std::abs(rval[at(r)][entry(r, c)]));
    return mx;
  };

  std::vector<int> pos(at(m), -1);
  for (int k = 0; k < m; ++k) {
    if (cb.head[0] >= 0 || rb.head[0] >= 0) return false;
    int pr = -1;
    int pc = -1;
    if (cb.head[1] >= 0) {
      pc = cb.head[1];
      pr = crow[at(pc)][0];
    } else {
      for (int r = rb.head[1]; r >= 0; r = rb.next[at(r)]) {
        const int c = rcol[at(r)][0];
        if (std::abs(rval[at(r)][0]) >= kThreshold * column_max(c)) {
          pr = r;
          pc = c;
          break;
        }
      }
    }
    if (pr < 0) {
      std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
      double best_abs = 0.0;
      int searched = 0;
      for (int cnt = 1; cnt <= m && !(searched >= kSearchDepth && pr >= 0); ++cnt) {
        for (int c = cb.head[at(cnt)]; c >= 0; c = cb.next[at(c)]) {
          const double cmax = column_max(c);
          for (int r : crow[at(c)]) {
            const double a = std::abs(rval[at(r)][entry(r, c)]);
            if (a < kThreshold * cmax || a <= kSingular) continue;
            const std::int64_t cost = static_cast<std::int64_t>(rb.count[at(r)] - 1) * (cnt - 1);
            if (cost < best_cost || (cost == best_cost && a > best_abs)) {
              best_cost = cost;
              best_abs = a;
              pr = r;
              pc = c;
            }
          }
          if (++searched >= kSearchDepth && pr >= 0) break;
        }
      }
      if (pr < 0) return false;
    }

    const std::size_t q = entry(pr, pc);
    const double a = rval[at(pr)][q];
    if (std::abs(a) <= kSingular) return false;
    prow_[at(k)] = pr;
    pcol_[at(k)] = pc;
    diag_[at(k)] = a;

    const std::size_t u0 = ur_index_.size();
    for (std::size_t t = 0; t < rcol[at(pr)].size(); ++t) {
      const int c = rcol[at(pr)][t];
      auto& rows = crow[at(c)];
      for (std::size_t s = 0; s < rows.size(); ++s) {
        if (rows[s] == pr) {
          swap_pop(rows, s);
          break;
        }
      }
      if (c == pc) continue;
      ur_index_.push_back(c);
      ur_value_.push_back(rval[at(pr)][t]);
      cb.move(c, static_cast<int>(rows.size()));
    }
    const std::size_t u1 = ur_index_.size();
    cb.remove(pc);
    rb.remove(pr);

    for (int j : crow[at(pc)]) {
      auto& cols = rcol[at(j)];
      auto& vals = rval[at(j)];
      const std::size_t e = entry(j, pc);
      const double l = vals[e] / a;
      swap_pop(cols, e);
      swap_pop(vals, e);
      l_index_.push_back(j);
      l_value_.push_back(l);
      for (std::size_t t = 0; t < cols.size(); ++t) pos[at(cols[t])] = static_cast<int>(t);
      for (std::size_t t = u0; t < u1; ++t) {
        const int c = ur_index_[t];
        const double delta = -l * ur_value_[t];
        if (pos[at(c)] >= 0) {
          vals[at(pos[at(c)])] += delta;
        } else {
          pos[at(c)] = static_cast<int>(cols.size());
          cols.push_back(c);
          vals.push_back(delta);
          crow[at(c)].push_back(j);
          cb.move(c, static_cast<int>(crow[at(c)].size()));
        }
      }
      for (int c : cols) pos[at(c)] = -1;
      rb.move(j, static_cast<int>(cols.size()));
    }
    crow[at(pc)].clear();
    rcol[at(pr)].clear();
    rval[at(pr)].clear();
    l_start_.push_back(static_cast<int>(l_index_.size()));
    ur_start_.push_back(static_cast<int>(ur_index_.size()));
  }

  // Column-wise copy of U for the forward solve.
  std::vector<int> kpos(at(m));
  for (int k = 0; k < m; ++k) kpos[at(pcol_[at(k)])] = k;
  uc_start_.assign(at(m) + 1, 0);
  for (int c : ur_index_) ++uc_start_[at(kpos[at(c)]) + 1];
  for (int k = 0; k < m; ++k) uc_start_[at(k) + 1] += uc_start_[at(k)];
  uc_index_.assign(ur_index_.size(), 0);
  uc_value_.assign(ur_index_.size(), 0.0);
  std::vector<int> fillp(uc_start_.begin(), uc_start_.end() - 1);
  for (int k = 0; k < m; ++k) {
    for (int p = ur_start_[at(k)]; p < ur_start_[at(k) + 1]; ++p) {
      const int dst = fillp[at(kpos[at(ur_index_[at(p)])])]++;
      uc_index_[at(dst)] = prow_[at(k)];
      uc_value_[at(dst)] = ur_value_[at(p)];
    }
  }
  return true;
}

void MarkowitzLU::solve(std::vector<double>& v) const {
  for (int k = 0; k < m_; ++k) {
    const double xp = v[at(prow_[at(k)])];
    if (xp == 0.0) continue;
    for (int p = l_start_[at(k)]; p < l_start_[at(k) + 1]; ++p) v[at(l_index_[at(p)])] -= l_value_[at(p)] * xp;
  }
  for (int k = m_ - 1; k >= 0; --k) {
    const double xk = v[at(prow_[at(k)])] / diag_[at(k)];
    work_[at(pcol_[at(k)])] = xk;
    if (xk == 0.0) continue;
    for (int p = uc_start_[at(k)]; p < uc_start_[at(k) + 1]; ++p) v[at(uc_index_[at(p)])] -= uc_value_[at(p)] * xk;
  }
  v.swap(work_);
}

void MarkowitzLU::solve_transpose(std::vector<double>& v) const {
  for (int k = 0; k < m_; ++k) {
    const double zk = v[at(pcol_[at(k)])] / diag_[at(k)];
    work_[at(prow_[at(k)])] = zk;
    if (zk == 0.0) continue;
    for (int p = ur_start_[at(k)]; p < ur_start_[at(k) + 1]; ++p) v[at(ur_index_[at(p)])] -= ur_value_[at(p)] * zk;
  }
  for (int k = m_ - 1; k >= 0; --k) {
    double acc = work_[at(prow_[at(k)])];
    for (int p = l_start_[at(k)]; p < l_start_[at(k) + 1]; ++p) acc -= l_value_[at(p)] * work_[at(l_index_[at(p)])];
    work_[at(prow_[at(k)])] = acc;
  }
  v.swap(work_);
}

}  // namespace oeh::milp::detail
