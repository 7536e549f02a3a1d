"""Shared fixtures for building valid records and tiny datasets."""

from agroyield.schema import (
    AgroRecord,
    Crop,
    District,
    Fertilizer,
    SoilProperty,
    Weather,
)

# values from the published sample rows (Dhaka 2008)
TABLE1_DHAKA_2008 = dict(avg_rainfall=2385.0, humidity=71.0,
                         urea=25967.0, tsp=8262.0, dap=1573.0)


def make_record(**over) -> AgroRecord:
    yield_t_ha = over.pop("yield_t_ha", 2.0)
    area = over.pop("area", 1000.0)
    fields = dict(
        district=District.Dhaka,
        year=2008,
        crop=Crop.AusRice,
        weather=Weather(avg_rainfall=2385.0, max_temp=34.0, min_temp=12.0,
                        humidity=71.0),
        fertilizer=Fertilizer(urea=25967.0, tsp=8262.0, dap=1573.0, mp=2000.0),
        land_fractions=(1.0, 0.0, 0.0, 0.0, 0.0, 0.0),
        soil_fractions=(1.0,) + (0.0,) * 18,
        soil_props=SoilProperty(moisture=3.0, texture=3.0, consistency=3.0,
                                reaction=6.5, structure=3.0, composition=3.0),
        area=area,
        production=yield_t_ha * area,
        yield_t_ha=yield_t_ha,
    )
    fields.update(over)
    return AgroRecord(**fields)
