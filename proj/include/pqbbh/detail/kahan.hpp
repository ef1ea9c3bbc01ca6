#ifndef PQBBH_DETAIL_KAHAN_HPP
#define PQBBH_DETAIL_KAHAN_HPP

namespace pqbbh::detail {

// Kahan-Neumaier compensated accumulator.
class KahanAccumulator {
public:
    void add(double v) {
        const double t = sum_ + v;
        if ((sum_ >= v ? sum_ : -sum_) >= (v >= 0 ? v : -v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }

    double sum() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace pqbbh::detail

#endif
