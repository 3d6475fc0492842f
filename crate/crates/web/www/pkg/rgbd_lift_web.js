/* @ts-self-types="./rgbd_lift_web.d.ts" */

/**
 * Result of rendering, lifting and measuring one synthetic box.
 */
export class BoxReport {
    static __wrap(ptr) {
        const obj = Object.create(BoxReport.prototype);
        obj.__wbg_ptr = ptr;
        BoxReportFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        BoxReportFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_boxreport_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get dropped_by_band() {
        const ret = wasm.boxreport_dropped_by_band(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @returns {number}
     */
    get height_mm() {
        const ret = wasm.boxreport_height_mm(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get kept() {
        const ret = wasm.boxreport_kept(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * `WIDTH x HEIGHT` RGBA: kept pixels in the object color, band-rejected
     * mask pixels red, everything else dimmed.
     * @returns {Uint8Array}
     */
    rgba() {
        const ret = wasm.boxreport_rgba(this.__wbg_ptr);
        var v1 = getArrayU8FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 1, 1);
        return v1;
    }
    /**
     * @returns {number}
     */
    get width_mm() {
        const ret = wasm.boxreport_width_mm(this.__wbg_ptr);
        return ret;
    }
}
if (Symbol.dispose) BoxReport.prototype[Symbol.dispose] = BoxReport.prototype.free;

/**
 * Sphere encoded with one depth convention, reconstructed with each model.
 */
export class SphereReport {
    static __wrap(ptr) {
        const obj = Object.create(SphereReport.prototype);
        obj.__wbg_ptr = ptr;
        SphereReportFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        SphereReportFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_spherereport_free(ptr, 0);
    }
    /**
     * RGBA heat map of the PlanarZ-reconstruction radial residual.
     * @returns {Uint8Array}
     */
    heatmap() {
        const ret = wasm.spherereport_heatmap(this.__wbg_ptr);
        var v1 = getArrayU8FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 1, 1);
        return v1;
    }
    /**
     * @returns {number}
     */
    get max_residual_planar() {
        const ret = wasm.spherereport_max_residual_planar(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get max_residual_ray() {
        const ret = wasm.spherereport_max_residual_ray(this.__wbg_ptr);
        return ret;
    }
}
if (Symbol.dispose) SphereReport.prototype[Symbol.dispose] = SphereReport.prototype.free;

/**
 * @param {number} width_mm
 * @param {number} height_mm
 * @param {number} depth_mm
 * @param {number} fx
 * @param {number} jitter_mm
 * @param {number} dilate_px
 * @param {number} half_width_mm
 * @param {number} trim
 * @returns {BoxReport}
 */
export function boxReport(width_mm, height_mm, depth_mm, fx, jitter_mm, dilate_px, half_width_mm, trim) {
    const ret = wasm.boxReport(width_mm, height_mm, depth_mm, fx, jitter_mm, dilate_px, half_width_mm, trim);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return BoxReport.__wrap(ret[0]);
}

/**
 * @param {number} col
 * @param {number} row
 * @param {number} depth_mm
 * @param {number} fx
 * @param {number} fy
 * @returns {Float64Array}
 */
export function compareModels(col, row, depth_mm, fx, fy) {
    const ret = wasm.compareModels(col, row, depth_mm, fx, fy);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * @returns {Uint32Array}
 */
export function frameSize() {
    const ret = wasm.frameSize();
    var v1 = getArrayU32FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 4, 4);
    return v1;
}

/**
 * @param {number} col
 * @param {number} row
 * @param {number} center_x_mm
 * @param {number} center_z_mm
 * @param {number} radius_mm
 * @param {number} fx
 * @returns {number}
 */
export function sphereDepthAt(col, row, center_x_mm, center_z_mm, radius_mm, fx) {
    const ret = wasm.sphereDepthAt(col, row, center_x_mm, center_z_mm, radius_mm, fx);
    return ret;
}

/**
 * @param {number} center_x_mm
 * @param {number} center_z_mm
 * @param {number} radius_mm
 * @param {number} fx
 * @returns {SphereReport}
 */
export function sphereReport(center_x_mm, center_z_mm, radius_mm, fx) {
    const ret = wasm.sphereReport(center_x_mm, center_z_mm, radius_mm, fx);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return SphereReport.__wrap(ret[0]);
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg_Error_30c8987f7c2ed4e2: function(arg0, arg1) {
            const ret = Error(getStringFromWasm0(arg0, arg1));
            return ret;
        },
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./rgbd_lift_web_bg.js": import0,
    };
}

const BoxReportFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_boxreport_free(ptr, 1));
const SphereReportFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_spherereport_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

function getArrayU32FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getUint32ArrayMemory0().subarray(ptr / 4, ptr / 4 + len);
}

function getArrayU8FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getUint8ArrayMemory0().subarray(ptr / 1, ptr / 1 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint32ArrayMemory0 = null;
function getUint32ArrayMemory0() {
    if (cachedUint32ArrayMemory0 === null || cachedUint32ArrayMemory0.byteLength === 0) {
        cachedUint32ArrayMemory0 = new Uint32Array(wasm.memory.buffer);
    }
    return cachedUint32ArrayMemory0;
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint32ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('rgbd_lift_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
