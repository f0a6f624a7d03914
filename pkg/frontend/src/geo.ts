/**
 * World country outlines as SVG path strings keyed by ISO alpha-3.
 *
 * The geometry ships with the bundle (Natural Earth 1:110m via the
 * world-atlas package, polygons pre-split at the antimeridian) and is
 * projected with a plain equirectangular mapping. Feature ids are ISO
 * numeric codes; iso-3166-1 turns them into alpha-3 keys. The CAMEO
 * code for each country is NOT known here: the server's country
 * metadata endpoint provides that mapping at runtime.
 */

import type { FeatureCollection } from "geojson";
import { whereNumeric } from "iso-3166-1";
import { feature } from "topojson-client";
import type { GeometryCollection, Topology } from "topojson-specification";
import world from "world-atlas/countries-110m.json";

export const MAP_WIDTH = 960;
export const MAP_HEIGHT = 480;

export interface CountryShape {
  iso3: string;
  /** Fallback display name; the API's name wins when present. */
  defaultName: string;
  path: string;
}

function x(lon: number): number {
  return ((lon + 180) / 360) * MAP_WIDTH;
}

function y(lat: number): number {
  return ((90 - lat) / 180) * MAP_HEIGHT;
}

function ringPath(ring: number[][]): string {
  const parts = ring.map(
    ([lon, lat], i) => `${i ? "L" : "M"}${x(lon).toFixed(1)},${y(lat).toFixed(1)}`,
  );
  return parts.join("") + "Z";
}

function polygonsPath(geometry: GeoJSON.Geometry): string {
  if (geometry.type === "Polygon") {
    return geometry.coordinates.map(ringPath).join("");
  }
  if (geometry.type === "MultiPolygon") {
    return geometry.coordinates
      .map((polygon) => polygon.map(ringPath).join(""))
      .join("");
  }
  return "";
}

let cache: CountryShape[] | null = null;

export function countryShapes(): CountryShape[] {
  if (cache) return cache;
  const topology = world as unknown as Topology;
  const countries = topology.objects.countries as GeometryCollection;
  const collection = feature(topology, countries) as FeatureCollection;
  const shapes: CountryShape[] = [];
  for (const f of collection.features) {
    if (!f.geometry) continue;
    const info = whereNumeric(String(f.id).padStart(3, "0"));
    // territories without an ISO assignment are drawn by nobody
    if (!info) continue;
    shapes.push({
      iso3: info.alpha3,
      defaultName: info.country,
      path: polygonsPath(f.geometry),
    });
  }
  cache = shapes;
  return shapes;
}
