#ifndef DVF_DVF_HPP
#define DVF_DVF_HPP

#include "assignment.hpp"
#include "common.hpp"
#include "experiment.hpp"
#include "field.hpp"
#include "flow.hpp"
#include "generators.hpp"
#include "mesh.hpp"
#include "pl.hpp"
#include "rng.hpp"
#include "simplify.hpp"
#include "skeleton.hpp"
#include "validation.hpp"
#include "vpath.hpp"
#include "vtk_io.hpp"

#endif
