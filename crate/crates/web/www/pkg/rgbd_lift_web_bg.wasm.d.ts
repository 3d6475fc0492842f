/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_boxreport_free: (a: number, b: number) => void;
export const __wbg_spherereport_free: (a: number, b: number) => void;
export const boxReport: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const boxreport_dropped_by_band: (a: number) => number;
export const boxreport_height_mm: (a: number) => number;
export const boxreport_kept: (a: number) => number;
export const boxreport_rgba: (a: number) => [number, number];
export const boxreport_width_mm: (a: number) => number;
export const compareModels: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const frameSize: () => [number, number];
export const sphereDepthAt: (a: number, b: number, c: number, d: number, e: number, f: number) => number;
export const sphereReport: (a: number, b: number, c: number, d: number) => [number, number, number];
export const spherereport_heatmap: (a: number) => [number, number];
export const spherereport_max_residual_planar: (a: number) => number;
export const spherereport_max_residual_ray: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
