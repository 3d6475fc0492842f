/* tslint:disable */
/* eslint-disable */

/**
 * Result of rendering, lifting and measuring one synthetic box.
 */
export class BoxReport {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `WIDTH x HEIGHT` RGBA: kept pixels in the object color, band-rejected
     * mask pixels red, everything else dimmed.
     */
    rgba(): Uint8Array;
    readonly dropped_by_band: number;
    readonly height_mm: number;
    readonly kept: number;
    readonly width_mm: number;
}

/**
 * Sphere encoded with one depth convention, reconstructed with each model.
 */
export class SphereReport {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * RGBA heat map of the PlanarZ-reconstruction radial residual.
     */
    heatmap(): Uint8Array;
    readonly max_residual_planar: number;
    readonly max_residual_ray: number;
}

export function boxReport(width_mm: number, height_mm: number, depth_mm: number, fx: number, jitter_mm: number, dilate_px: number, half_width_mm: number, trim: number): BoxReport;

export function compareModels(col: number, row: number, depth_mm: number, fx: number, fy: number): Float64Array;

export function frameSize(): Uint32Array;

export function sphereDepthAt(col: number, row: number, center_x_mm: number, center_z_mm: number, radius_mm: number, fx: number): number;

export function sphereReport(center_x_mm: number, center_z_mm: number, radius_mm: number, fx: number): SphereReport;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_boxreport_free: (a: number, b: number) => void;
    readonly __wbg_spherereport_free: (a: number, b: number) => void;
    readonly boxReport: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly boxreport_dropped_by_band: (a: number) => number;
    readonly boxreport_height_mm: (a: number) => number;
    readonly boxreport_kept: (a: number) => number;
    readonly boxreport_rgba: (a: number) => [number, number];
    readonly boxreport_width_mm: (a: number) => number;
    readonly compareModels: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly frameSize: () => [number, number];
    readonly sphereDepthAt: (a: number, b: number, c: number, d: number, e: number, f: number) => number;
    readonly sphereReport: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly spherereport_heatmap: (a: number) => [number, number];
    readonly spherereport_max_residual_planar: (a: number) => number;
    readonly spherereport_max_residual_ray: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
