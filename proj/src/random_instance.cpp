#include "qsr/random_instance.hpp"

namespace qsr {

BinaryNetwork random_network(const Calculus& c, int n, RandomStream& rng,
                             double keep_prob) {
    BinaryNetwork net = BinaryNetwork::full(c, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Bits keep;
            do {
                keep = Bits::none();
                for (int r = 0; r < c.size(); ++r)
                    if (rng.unit() < keep_prob) keep.set(r);
            } while (keep.empty());
            net.at(i, j) = keep;
            net.at(j, i) = net.conv_image(keep);
        }
    return net;
}

} // namespace qsr
