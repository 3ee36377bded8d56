// Python bindings for the core operations. Reports cross the boundary as
// JSON strings; the package wrapper turns them into dicts.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sparsenc/baselines.hpp"
#include "sparsenc/column_select.hpp"
#include "sparsenc/encoder.hpp"
#include "sparsenc/matrix_io.hpp"
#include "sparsenc/metrics.hpp"
#include "sparsenc/report.hpp"
#include "sparsenc/synthetic.hpp"

namespace py = pybind11;
using namespace sparsenc;

namespace {

ColumnSelection make_selection(const std::vector<int>& indices, int d) {
    return ColumnSelection(indices, d);
}

SelectionStrategy make_strategy(const std::string& kind, std::uint64_t seed, int trials) {
    SelectionStrategy s;
    if (kind == "greedy")
        s.kind = SelectionKind::Greedy;
    else if (kind == "randomized")
        s.kind = SelectionKind::Randomized;
    else
        throw std::invalid_argument("strategy must be 'greedy' or 'randomized'");
    s.seed = seed;
    s.trials = trials;
    return s;
}

MatrixFormat make_format(const std::string& fmt) {
    if (fmt == "auto") return MatrixFormat::Auto;
    if (fmt == "csv") return MatrixFormat::Csv;
    if (fmt == "mm" || fmt == "matrix-market") return MatrixFormat::MatrixMarket;
    throw std::invalid_argument("format must be 'auto', 'csv', or 'mm'");
}

SyntheticKind make_kind(const std::string& kind) {
    if (kind == "power-law") return SyntheticKind::PowerLaw;
    if (kind == "spiked") return SyntheticKind::Spiked;
    if (kind == "flat") return SyntheticKind::Flat;
    if (kind == "all-ones") return SyntheticKind::AllOnes;
    throw std::invalid_argument("kind must be power-law|spiked|flat|all-ones");
}

}  // namespace

PYBIND11_MODULE(_sparsenc, m) {
    m.doc() = "sparse linear encoders via column subset selection";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("svd", [](const Matrix& a) {
        SvdFactors f = svd(a);
        return py::make_tuple(f.U, f.sigma, f.V);
    }, py::arg("a"));
    m.def("truncate_rank", [](const Matrix& a, int k) { return truncate_rank(a, k); },
          py::arg("a"), py::arg("k"));
    m.def("pseudo_inverse", &pseudo_inverse, py::arg("a"));
    m.def("qr_thin", [](const Matrix& c) {
        QrFactors f = qr_thin(c);
        return py::make_tuple(f.Q, f.R);
    }, py::arg("c"));

    m.def("select_columns_greedy", [](const Matrix& x, int k, int r) {
        return select_columns_greedy(x, k, r).indices;
    }, py::arg("x"), py::arg("k"), py::arg("r"));
    m.def("select_columns_randomized", [](const Matrix& x, int k, int r, std::uint64_t seed) {
        return select_columns_randomized(x, k, r, seed).indices;
    }, py::arg("x"), py::arg("k"), py::arg("r"), py::arg("seed") = 0);
    m.def("boost_best_of",
          [](const Matrix& x, int k, int r, int trials, std::uint64_t seed) {
              return boost_best_of(x, k, r, trials, seed).indices;
          },
          py::arg("x"), py::arg("k"), py::arg("r"), py::arg("trials") = 1, py::arg("seed") = 0);
    m.def("best_rank_k_in_span",
          [](const Matrix& x, const std::vector<int>& indices, int k) {
              return best_rank_k_in_span(x, make_selection(indices, x.cols()), k);
          },
          py::arg("x"), py::arg("indices"), py::arg("k"));
    m.def("approx_top_right_singular", &approx_top_right_singular, py::arg("x"), py::arg("k"),
          py::arg("eps") = 0.5, py::arg("seed") = 0);
    m.def("adaptive_sample",
          [](const Matrix& x, const std::vector<int>& indices, int s, std::uint64_t seed) {
              return adaptive_sample(x, make_selection(indices, x.cols()), s, seed).indices;
          },
          py::arg("x"), py::arg("indices"), py::arg("s"), py::arg("seed") = 0);
    m.def("materialize_sampling", [](const std::vector<int>& indices, int d) {
        return materialize_sampling(make_selection(indices, d));
    }, py::arg("indices"), py::arg("d"));

    m.def("encoder_from_columns",
          [](const Matrix& x, const std::vector<int>& indices, int k) {
              EncoderBuild b = encoder_from_columns(x, make_selection(indices, x.cols()), k);
              return py::make_tuple(b.encoder.H, b.decoder.G);
          },
          py::arg("x"), py::arg("indices"), py::arg("k"));
    m.def("information_loss",
          [](const Matrix& x, const Matrix& h) { return information_loss(x, h); }, py::arg("x"),
          py::arg("h"));
    m.def("optimal_decoder",
          [](const Matrix& x, const Matrix& h) { return optimal_decoder(x, h).G; }, py::arg("x"),
          py::arg("h"));
    m.def("encode", &encode, py::arg("x"), py::arg("h"));
    m.def("reconstruct", &reconstruct, py::arg("x"), py::arg("h"));
    m.def("orthonormalize", [](const Matrix& h) {
        SparseEncoder enc;
        enc.H = h;
        return orthonormalize(enc).H;
    }, py::arg("h"));
    m.def("adaptive_schedule", &adaptive_schedule, py::arg("k"), py::arg("eps"));

    m.def("batch_encoder",
          [](const Matrix& x, int k, int r, const std::string& strategy, std::uint64_t seed,
             int trials) {
              EncodeResult res = batch_encoder(x, k, r, make_strategy(strategy, seed, trials));
              return py::make_tuple(res.encoder.H, res.decoder.G,
                                    report_to_json(res.report, false));
          },
          py::arg("x"), py::arg("k"), py::arg("r"), py::arg("strategy") = "randomized",
          py::arg("seed") = 0, py::arg("trials") = 1);
    m.def("iterative_encoder",
          [](const Matrix& x, int k, const std::vector<int>& schedule,
             const std::string& strategy, std::uint64_t seed, int trials) {
              EncodeResult res =
                  iterative_encoder(x, k, schedule, make_strategy(strategy, seed, trials));
              return py::make_tuple(res.encoder.H, res.decoder.G,
                                    report_to_json(res.report, false));
          },
          py::arg("x"), py::arg("k"), py::arg("schedule"), py::arg("strategy") = "randomized",
          py::arg("seed") = 0, py::arg("trials") = 1);

    m.def("tpower",
          [](const Matrix& a, int r, std::uint64_t seed, int max_iters, double tol) {
              TPowerOptions opts;
              opts.max_iters = max_iters;
              opts.tol = tol;
              TPowerResult res = tpower(a, r, seed, opts);
              return py::make_tuple(res.v, res.degenerate, res.iterations);
          },
          py::arg("a"), py::arg("r"), py::arg("seed") = 0, py::arg("max_iters") = 1000,
          py::arg("tol") = 1e-8);
    m.def("deflate", &deflate, py::arg("a"), py::arg("h"));
    m.def("sparse_components_deflation",
          [](const Matrix& a, int k, int r, std::uint64_t seed) {
              return sparse_components_deflation(a, k, r, seed).H;
          },
          py::arg("a"), py::arg("k"), py::arg("r"), py::arg("seed") = 0);

    m.def("normalized_information_loss", &normalized_information_loss, py::arg("x"), py::arg("h"),
          py::arg("k"));
    m.def("symmetric_explained_variance", &symmetric_explained_variance, py::arg("x"),
          py::arg("h"), py::arg("k"));
    m.def("variance_conversion_check",
          [](const Matrix& x, const Matrix& h, int k) {
              VarianceConversion vc = variance_conversion_check(x, h, k);
              py::dict d;
              d["explained"] = vc.explained;
              d["bound"] = vc.bound;
              d["weak_bound"] = vc.weak_bound;
              d["epsilon"] = vc.epsilon;
              d["holds"] = vc.holds;
              return d;
          },
          py::arg("x"), py::arg("h"), py::arg("k"));
    m.def("combined_sparsity", &combined_sparsity, py::arg("h"));
    m.def("avg_column_sparsity", &avg_column_sparsity, py::arg("h"));
    m.def("allones_sanity", &allones_sanity, py::arg("n"), py::arg("d"), py::arg("r"));

    m.def("load_matrix",
          [](const std::string& path, const std::string& fmt) {
              return load_matrix(path, make_format(fmt));
          },
          py::arg("path"), py::arg("format") = "auto");
    m.def("save_matrix",
          [](const std::string& path, const Matrix& mat, const std::string& fmt) {
              save_matrix(path, mat, make_format(fmt));
          },
          py::arg("path"), py::arg("m"), py::arg("format") = "auto");
    m.def("generate_synthetic",
          [](const std::string& kind, int n, int d, std::uint64_t seed, double decay, int spikes,
             double spike, double noise) {
              SyntheticParams p;
              p.decay = decay;
              p.spikes = spikes;
              p.spike = spike;
              p.noise = noise;
              return generate_synthetic(make_kind(kind), n, d, seed, p);
          },
          py::arg("kind"), py::arg("n"), py::arg("d"), py::arg("seed") = 0,
          py::arg("decay") = 1.0, py::arg("spikes") = 1, py::arg("spike") = 10.0,
          py::arg("noise") = 0.1);
}
