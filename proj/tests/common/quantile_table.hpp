#pragma once

// Standard normal quantiles at 50 significant digits, rounded to 20
// (tests/oracles/quantile_oracle.py).

namespace ldcube::testing {

struct QuantilePoint {
  double u;
  double x;
};

inline constexpr QuantilePoint kQuantileTable[] = {
    {1e-10, -6.3613409024040561991},        {1e-08, -5.6120012441747887279},
    {1e-06, -4.7534243088228989573},        {0.0001, -3.7190164854556805523},
    {0.001, -3.0902323061678135354},        {0.01, -2.3263478740408410931},
    {0.025, -1.9599639845400542118},        {0.05, -1.644853626951472688},
    {0.1, -1.2815515655446004353},          {0.25, -0.6744897501960817432},
    {0.5, 0.0},                             {0.6, 0.25334710313579974132},
    {0.75, 0.6744897501960817432},          {0.8413447460685429, 0.99999999999999990574},
    {0.9, 1.2815515655446005935},           {0.975, 1.9599639845400538556},
    {0.99, 2.3263478740408407676},          {0.999, 3.0902323061678132778},
    {0.9999, 3.7190164854557083867},        {0.999999, 4.7534243088170877657},
    {0.9999999999, 6.3613408896974218642},
};

}  // namespace ldcube::testing
