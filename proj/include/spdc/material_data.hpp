// Tabulated optical constants used by the built-in material presets.
// See docs/materials.md for provenance.
#pragma once

#include <array>

namespace spdc::data {

struct IndexPoint {
  double wavelength_nm;
  double index;
};

// Crystalline silicon, real refractive index. 500-1450 nm: M. A. Green,
// Sol. Energy Mater. Sol. Cells 92, 1305 (2008), 300 K. 1500-3000 nm:
// H. H. Li, J. Phys. Chem. Ref. Data 9, 561 (1980), 293 K.
inline constexpr std::array<IndexPoint, 108> silicon_index = {{
    {500.0, 4.294}, {510.0, 4.241}, {520.0, 4.193}, {530.0, 4.151},
    {540.0, 4.112}, {550.0, 4.077}, {560.0, 4.045}, {570.0, 4.015},
    {580.0, 3.988}, {590.0, 3.963}, {600.0, 3.94}, {610.0, 3.918},
    {620.0, 3.898}, {630.0, 3.879}, {640.0, 3.861}, {650.0, 3.844},
    {660.0, 3.828}, {670.0, 3.813}, {680.0, 3.798}, {690.0, 3.784},
    {700.0, 3.772}, {710.0, 3.759}, {720.0, 3.748}, {730.0, 3.737},
    {740.0, 3.727}, {750.0, 3.717}, {760.0, 3.708}, {770.0, 3.699},
    {780.0, 3.691}, {790.0, 3.683}, {800.0, 3.675}, {810.0, 3.668},
    {820.0, 3.661}, {830.0, 3.654}, {840.0, 3.647}, {850.0, 3.641},
    {860.0, 3.635}, {870.0, 3.63}, {880.0, 3.624}, {890.0, 3.619},
    {900.0, 3.614}, {910.0, 3.609}, {920.0, 3.604}, {930.0, 3.6},
    {940.0, 3.595}, {950.0, 3.591}, {960.0, 3.587}, {970.0, 3.583},
    {980.0, 3.579}, {990.0, 3.575}, {1000.0, 3.572}, {1010.0, 3.568},
    {1020.0, 3.565}, {1030.0, 3.562}, {1040.0, 3.559}, {1050.0, 3.556},
    {1060.0, 3.553}, {1070.0, 3.55}, {1080.0, 3.547}, {1090.0, 3.545},
    {1100.0, 3.542}, {1110.0, 3.54}, {1120.0, 3.537}, {1130.0, 3.535},
    {1140.0, 3.532}, {1150.0, 3.53}, {1160.0, 3.528}, {1170.0, 3.526},
    {1180.0, 3.524}, {1190.0, 3.522}, {1200.0, 3.52}, {1210.0, 3.518},
    {1220.0, 3.517}, {1230.0, 3.515}, {1240.0, 3.513}, {1250.0, 3.511},
    {1260.0, 3.509}, {1270.0, 3.508}, {1280.0, 3.506}, {1290.0, 3.505},
    {1300.0, 3.503}, {1310.0, 3.502}, {1320.0, 3.5}, {1330.0, 3.499},
    {1340.0, 3.497}, {1350.0, 3.496}, {1360.0, 3.495}, {1370.0, 3.494},
    {1380.0, 3.492}, {1390.0, 3.491}, {1400.0, 3.49}, {1410.0, 3.489},
    {1420.0, 3.488}, {1430.0, 3.487}, {1440.0, 3.486}, {1450.0, 3.485},
    {1500.0, 3.4799}, {1550.0, 3.4757}, {1600.0, 3.4719}, {1650.0, 3.4684},
    {1700.0, 3.4653}, {1800.0, 3.4597}, {1900.0, 3.455}, {2000.0, 3.451},
    {2250.0, 3.4431}, {2500.0, 3.4375}, {2750.0, 3.4334}, {3000.0, 3.4302},
}};

// Congruent lithium niobate, D. E. Zelmon, D. L. Small, D. Jundt,
// JOSA B 14, 3319 (1997). n^2 = 1 + sum B lambda^2 / (lambda^2 - C), lambda in um.
struct SellmeierPole {
  double strength;
  double pole_um2;
};

inline constexpr std::array<SellmeierPole, 3> linbo3_extraordinary = {{
    {2.9804, 0.02047}, {0.5981, 0.0666}, {8.9543, 416.08}}};

inline constexpr std::array<SellmeierPole, 3> linbo3_ordinary = {{
    {2.6734, 0.01764}, {1.2290, 0.05914}, {12.614, 474.6}}};

inline constexpr double linbo3_min_nm = 400.0;
inline constexpr double linbo3_max_nm = 5000.0;

}  // namespace spdc::data
