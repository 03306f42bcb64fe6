import { ApiClient } from './api';
import { TaskCache } from './cache';
import { ConnectionMonitor, PING_INTERVAL_MS } from './connection';
import { createTranslator, loadBundle } from './i18n';
import { LocalQueue } from './queue';
import { renderWorkspace } from './render';
import { WorkspaceController } from './workspace';
const UI_LANGUAGE_KEY = 'paracurate.uiLanguage';
const USER_KEY = 'paracurate.userId';
const RTL_UI_TAGS = new Set(['nqo_Nkoo', 'ary_Arab', 'arz_Arab']);
/**
 * Browser bootstrap: register the shell service worker, log in (online
 * only; a first visit without connectivity cannot authenticate), then run
 * the one-task-at-a-time loop with the offline queue underneath.
 */
export async function startApp(root) {
    if ('serviceWorker' in navigator) {
        try {
            await navigator.serviceWorker.register('sw.js');
        }
        catch {
            // Shell caching is an enhancement; the workspace runs without it.
        }
    }
    const uiLanguage = localStorage.getItem(UI_LANGUAGE_KEY) ?? 'eng_Latn';
    const bundle = await loadBundle(uiLanguage);
    const t = createTranslator(bundle);
    document.title = t('appTitle');
    const api = new ApiClient('');
    const monitor = new ConnectionMonitor(api);
    const online = await monitor.probe();
    if (!api.hasToken()) {
        if (!online) {
            root.setAttribute('dir', RTL_UI_TAGS.has(uiLanguage) ? 'rtl' : 'ltr');
            root.textContent = t('offlineFirstVisit');
            return;
        }
        await showLogin(root, api, t);
    }
    const userId = localStorage.getItem(USER_KEY) ?? 'unknown';
    const controller = new WorkspaceController(userId, api, new LocalQueue(localStorage), new TaskCache());
    const redraw = () => {
        renderWorkspace(root, {
            online: monitor.isOnline(),
            counters: controller.counters,
            item: controller.current(),
            notices: controller.takeNotices(),
            pendingUploads: controller.pendingUploads(),
            uiDirection: RTL_UI_TAGS.has(uiLanguage) ? 'rtl' : 'ltr',
        }, t);
        wireControls(root, controller, monitor, redraw);
    };
    monitor.onChange((isOnline) => {
        if (isOnline) {
            void controller
                .drain()
                .then(() => controller.load(true))
                .then(redraw);
        }
        else {
            redraw();
        }
    });
    monitor.start(PING_INTERVAL_MS);
    await controller.load(online);
    if (online)
        await controller.drain();
    redraw();
}
export function wireControls(root, controller, monitor, redraw) {
    const editor = root.querySelector('[data-testid="target-editor"]');
    const act = async (fn) => {
        if (!fn())
            return;
        if (monitor.isOnline()) {
            await controller.drain();
            await controller.load(true);
        }
        redraw();
    };
    root
        .querySelector('[data-testid="submit-button"]')
        ?.addEventListener('click', () => void act(() => controller.submit(editor?.value ?? '')));
    root
        .querySelector('[data-testid="skip-button"]')
        ?.addEventListener('click', () => void act(() => controller.skip()));
    root
        .querySelector('[data-testid="undo-button"]')
        ?.addEventListener('click', () => {
        if (controller.undo())
            redraw();
    });
}
async function showLogin(root, api, t) {
    root.textContent = '';
    const form = document.createElement('form');
    form.setAttribute('data-testid', 'login-form');
    const user = document.createElement('input');
    user.placeholder = t('loginUserId');
    const secret = document.createElement('input');
    secret.type = 'password';
    secret.placeholder = t('loginSecret');
    const button = document.createElement('button');
    button.type = 'submit';
    button.textContent = t('loginButton');
    form.append(user, secret, button);
    root.appendChild(form);
    await new Promise((resolve) => {
        form.addEventListener('submit', (event) => {
            event.preventDefault();
            void api
                .login(user.value, secret.value)
                .then(() => {
                localStorage.setItem(USER_KEY, user.value);
                resolve();
            })
                .catch(() => {
                button.textContent = t('loginFailed');
            });
        });
    });
}
