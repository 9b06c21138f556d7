#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bhflow/curvature.hpp"
#include "bhflow/embed.hpp"
#include "bhflow/io.hpp"
#include "bhflow/registration.hpp"

namespace py = pybind11;
using namespace bhflow;

namespace {

struct PyMesh {
  MeshPtr ptr;
};

struct PyChart {
  EmbeddingPtr ptr;
};

EnergyParams make_params(double alpha, double beta, double gamma, double dt,
                         double epsilon, int max_iters, double delta_margin) {
  EnergyParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.dt = dt;
  p.epsilon = epsilon;
  p.max_iters = max_iters;
  p.delta_margin = delta_margin;
  return p;
}

py::dict run_to_dict(const RegistrationRun& run) {
  py::dict d;
  d["map"] = run.map.values;
  d["mu"] = run.mu.values;
  d["sup_mu"] = run.mu.sup_norm;
  d["iterations"] = run.iterations;
  d["stop"] = stop_reason_name(run.stop);
  d["max_landmark_deviation"] = run.max_landmark_deviation;
  py::list trace;
  for (const TraceRow& row : run.trace) {
    py::dict r;
    r["iteration"] = row.iteration;
    r["total"] = row.total;
    r["components"] = row.components;
    r["dt"] = row.dt;
    r["sup_mu"] = row.sup_mu;
    trace.append(r);
  }
  d["trace"] = trace;
  return d;
}

DiscreteMap make_map(const PyChart& source, const PyChart& target) {
  DiscreteMap map;
  map.source = source.ptr;
  map.target = target.ptr;
  map.values = target.ptr->coords;
  return map;
}

}  // namespace

PYBIND11_MODULE(_bhflow, m) {
  m.doc() = "Quasiconformal surface maps: coefficients, flows, registration";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg =
          std::string(error_code_name(e.code())) + ": " + e.what();
      if (is_input_error(e.code()))
        PyErr_SetString(PyExc_ValueError, msg.c_str());
      else
        PyErr_SetString(PyExc_RuntimeError, msg.c_str());
    }
  });

  py::class_<PyMesh>(m, "Mesh")
      .def(py::init([](const std::vector<std::array<double, 3>>& vertices,
                       const std::vector<std::array<int, 3>>& faces) {
             std::vector<Eigen::Vector3d> vs;
             vs.reserve(vertices.size());
             for (const auto& v : vertices)
               vs.emplace_back(v[0], v[1], v[2]);
             return PyMesh{make_mesh(std::move(vs), faces)};
           }),
           py::arg("vertices"), py::arg("faces"))
      .def_property_readonly(
          "vertex_count", [](const PyMesh& m_) { return m_.ptr->vertex_count(); })
      .def_property_readonly(
          "face_count", [](const PyMesh& m_) { return m_.ptr->face_count(); })
      .def_property_readonly(
          "boundary_loop_count",
          [](const PyMesh& m_) { return m_.ptr->boundary_loops.size(); })
      .def_property_readonly("vertices",
                             [](const PyMesh& m_) {
                               std::vector<std::array<double, 3>> out;
                               out.reserve(m_.ptr->vertices.size());
                               for (const auto& v : m_.ptr->vertices)
                                 out.push_back({v.x(), v.y(), v.z()});
                               return out;
                             })
      .def_property_readonly(
          "faces", [](const PyMesh& m_) { return m_.ptr->faces; });

  m.def(
      "load_mesh",
      [](const std::string& path) {
        LoadedMesh lm = load_mesh(path);
        return py::make_tuple(PyMesh{lm.mesh}, lm.fan_split_faces);
      },
      py::arg("path"), "Load OBJ or ASCII PLY; returns (mesh, fan_splits)");

  py::class_<PyChart>(m, "Chart")
      .def_property_readonly(
          "coords", [](const PyChart& c) { return c.ptr->coords; })
      .def_property_readonly("domain",
                             [](const PyChart& c) {
                               return std::string(
                                   domain_kind_name(c.ptr->domain));
                             })
      .def_property_readonly(
          "pole", [](const PyChart& c) { return c.ptr->pole_vertex; });

  m.def(
      "disk_chart",
      [](const PyMesh& mesh, const std::vector<cplx>& coords) {
        return PyChart{std::make_shared<const PlanarEmbedding>(
            PlanarEmbedding::disk(mesh.ptr, coords))};
      },
      py::arg("mesh"), py::arg("coords"));
  m.def(
      "sphere_chart",
      [](const PyMesh& mesh, const std::vector<cplx>& coords, int pole) {
        return PyChart{std::make_shared<const PlanarEmbedding>(
            PlanarEmbedding::sphere(mesh.ptr, coords, pole))};
      },
      py::arg("mesh"), py::arg("coords"), py::arg("pole"));
  m.def(
      "disk_embed",
      [](const PyMesh& mesh) {
        return PyChart{std::make_shared<const PlanarEmbedding>(
            fallback_disk_embed(mesh.ptr))};
      },
      py::arg("mesh"),
      "Circle boundary plus mean-value interior solve for a disk-topology "
      "mesh");

  m.def(
      "curvatures",
      [](const PyMesh& mesh) {
        const Curvatures c = discrete_curvatures(*mesh.ptr);
        return py::make_tuple(c.mean, c.gauss);
      },
      py::arg("mesh"), "Per-vertex (mean, Gaussian) curvature estimates");

  m.def(
      "extract_bc",
      [](const PyChart& source, const PyChart& target) {
        const BeltramiCoefficient mu = compute_bc(make_map(source, target));
        return py::make_tuple(mu.values, mu.sup_norm);
      },
      py::arg("source"), py::arg("target"),
      "Coefficient of the vertex-correspondence map; returns (values, sup)");

  m.def(
      "extract_bc_values",
      [](const PyChart& source, const std::vector<cplx>& values) {
        DiscreteMap map;
        map.source = source.ptr;
        map.target = source.ptr;
        map.values = values;
        const BeltramiCoefficient mu = compute_bc(map);
        return py::make_tuple(mu.values, mu.sup_norm);
      },
      py::arg("source"), py::arg("values"),
      "Coefficient of the map sending chart vertices to the given values");

  m.def(
      "reconstruct_map",
      [](const PyChart& chart, const std::vector<cplx>& mu, int n_steps,
         const std::string& kernel) {
        FlowSchedule schedule;
        schedule.n_steps = n_steps;
        std::optional<DomainKind> kd;
        if (kernel == "disk") kd = DomainKind::Disk;
        else if (kernel == "sphere") kd = DomainKind::Sphere;
        else if (!kernel.empty())
          fail(ErrorCode::Config, "kernel must be disk, sphere, or empty");
        return reconstruct(BeltramiCoefficient::from_values(mu), schedule,
                           chart.ptr, chart.ptr, kd)
            .values;
      },
      py::arg("chart"), py::arg("mu"), py::arg("n_steps") = 20,
      py::arg("kernel") = "",
      "Flow the identity on the chart to the map of the coefficient; "
      "`kernel` overrides which reflection terms the flow kernel carries");

  m.def(
      "map_variation",
      [](const PyChart& chart, const std::vector<cplx>& values,
         const std::vector<cplx>& nu, const std::string& kernel) {
        DiscreteMap f;
        f.source = chart.ptr;
        f.target = chart.ptr;
        f.values = values;
        DomainKind domain = chart.ptr->domain;
        if (kernel == "disk") domain = DomainKind::Disk;
        else if (kernel == "sphere") domain = DomainKind::Sphere;
        else if (!kernel.empty())
          fail(ErrorCode::Config, "kernel must be disk, sphere, or empty");
        return variation(f, nu, domain);
      },
      py::arg("chart"), py::arg("values"), py::arg("nu"),
      py::arg("kernel") = "",
      "First variation of the map under a coefficient perturbation");

  m.def(
      "register_features",
      [](const PyChart& source, const PyChart& target,
         const std::vector<double>& f1, const std::vector<double>& f2,
         double alpha, double beta, double gamma, double dt, double epsilon,
         int max_iters, double delta_margin, int n_steps) {
        FlowSchedule schedule;
        schedule.n_steps = n_steps;
        return run_to_dict(register_features(
            source.ptr, target.ptr, f1, f2,
            make_params(alpha, beta, gamma, dt, epsilon, max_iters,
                        delta_margin),
            schedule));
      },
      py::arg("source"), py::arg("target"), py::arg("f1"), py::arg("f2"),
      py::arg("alpha") = 1.0, py::arg("beta") = 2.0, py::arg("gamma") = 2.0,
      py::arg("dt") = 0.1, py::arg("epsilon") = 1e-6,
      py::arg("max_iters") = 500, py::arg("delta_margin") = 0.02,
      py::arg("n_steps") = 20);

  m.def(
      "register_landmarks",
      [](const PyChart& source,
         const std::vector<std::pair<std::vector<int>, std::vector<cplx>>>&
             curves,
         double mask_radius, double dt, double epsilon, int max_iters,
         double delta_margin) {
        LandmarkSet set;
        set.mask_radius = mask_radius;
        for (const auto& [vertices, targets] : curves)
          set.curves.push_back({vertices, targets});
        return run_to_dict(register_landmarks(
            source.ptr, set,
            make_params(1.0, 2.0, 2.0, dt, epsilon, max_iters, delta_margin),
            FlowSchedule{}));
      },
      py::arg("source"), py::arg("curves"), py::arg("mask_radius") = -1.0,
      py::arg("dt") = 0.1, py::arg("epsilon") = 1e-6,
      py::arg("max_iters") = 500, py::arg("delta_margin") = 0.02);

  m.def(
      "register_geometry",
      [](const PyChart& source, const PyChart& target, double alpha,
         double beta, double gamma, double dt, double epsilon, int max_iters,
         double delta_margin, int n_steps) {
        FlowSchedule schedule;
        schedule.n_steps = n_steps;
        return run_to_dict(register_geometry(
            source.ptr, target.ptr,
            make_params(alpha, beta, gamma, dt, epsilon, max_iters,
                        delta_margin),
            schedule));
      },
      py::arg("source"), py::arg("target"), py::arg("alpha") = 1.0,
      py::arg("beta") = 2.0, py::arg("gamma") = 2.0, py::arg("dt") = 0.1,
      py::arg("epsilon") = 1e-6, py::arg("max_iters") = 500,
      py::arg("delta_margin") = 0.02, py::arg("n_steps") = 20);
}
